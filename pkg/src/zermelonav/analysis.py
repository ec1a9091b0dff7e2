"""Higher-level experiments: indicatrix sampling, reachable sets, target
shooting, and classical-vs-generalized transit-time comparison.

The unit indicatrix of the travel-time norm at p is the flow-translate of the
h-sphere of radius speed(p), so it can be sampled in closed form.  Reachable
sets integrate one geodesic per heading.  Shooting finds the launch angle
whose geodesic passes closest to a target (closest-approach minimization with
golden-section refinement), which stays robust for nonreversible norms and
near focal configurations where two-point Newton iteration does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZermeloError
from .fields import NavigationData, Point2, Rect, Tangent2, heading_grid
from .randers import RandersMetric
from .spray import (InitialCondition, SprayField, StepControl, Trajectory,
                    integrate_geodesic, initial_velocity)

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Indicatrix:
    """Sampled unit level set {t : F(p, t) = 1} at a base point."""

    point: Point2
    headings: list[float]
    vectors: list[Tangent2]
    metric_tag: str
    _metric: RandersMetric

    def radial(self, psi: float) -> float:
        """Radius of the level set along the chart direction psi, from the
        1-homogeneity of the norm."""
        return 1.0 / self._metric.F(self.point,
                                    Tangent2(math.cos(psi), math.sin(psi)))


def sample_indicatrix(metric: RandersMetric, p: Point2, n: int) -> Indicatrix:
    """Sample the unit level set at p over n headings (n >= 8).

    Every sample is verified to have unit norm within 1e-10.
    """
    if n < 8:
        raise ValueError("need at least 8 headings")
    headings = heading_grid(n)
    vectors = []
    for phi in headings:
        t = initial_velocity(metric.data, p, phi)
        f = metric.F(p, t)
        if abs(f - 1.0) > 1e-10:
            raise AssertionError(
                f"indicatrix sample off the unit level set: F={f} at phi={phi}")
        vectors.append(t)
    return Indicatrix(p, headings, vectors, metric.tag, metric)


@dataclass(frozen=True)
class ReachableSet:
    """Endpoints of geodesics from one base point after a fixed time.

    ``endpoints[i]`` is None when heading i terminated early; the reason is
    then in ``reasons[i]``.
    """

    point: Point2
    horizon: float
    headings: list[float]
    endpoints: list[Point2 | None]
    reasons: list[str]
    metric_tag: str

    @property
    def complete(self) -> bool:
        return all(e is not None for e in self.endpoints)

    def polygon(self) -> list[tuple[float, float]]:
        """Completed endpoints in heading order, as a closed curve."""
        return [(e.x, e.y) for e in self.endpoints if e is not None]

    def radial(self, psi: float) -> float:
        """Radius of the endpoint curve around the base point along chart
        direction psi (linear interpolation in polar angle; requires a
        complete, star-shaped set)."""
        if not self.complete:
            raise ZermeloError("radial profile needs a complete reachable set")
        angs = []
        rads = []
        for e in self.endpoints:
            dx, dy = e.x - self.point.x, e.y - self.point.y
            angs.append(math.atan2(dy, dx) % _TWO_PI)
            rads.append(math.hypot(dx, dy))
        order = np.argsort(angs)
        a = np.asarray(angs)[order]
        r = np.asarray(rads)[order]
        a = np.concatenate([a - _TWO_PI, a, a + _TWO_PI])
        r = np.concatenate([r, r, r])
        return float(np.interp(psi % _TWO_PI, a, r))


def reachable_set(spray: SprayField, p0: Point2, t: float,
                  headings: list[float],
                  control: StepControl | None = None) -> ReachableSet:
    """Integrate one geodesic per heading to time t and collect endpoints."""
    if t <= 0.0:
        raise ValueError("horizon must be positive")
    endpoints: list[Point2 | None] = []
    reasons: list[str] = []
    for phi in headings:
        ic = InitialCondition.from_heading(spray.metric, p0, phi)
        traj = integrate_geodesic(spray, ic, t, control)
        if traj.reason == "time_reached":
            endpoints.append(traj.final_state.p)
        else:
            endpoints.append(None)
        reasons.append(traj.reason)
    return ReachableSet(p0, t, headings, endpoints, reasons, spray.metric.tag)


@dataclass(frozen=True)
class CurveComparison:
    """Radial comparison of two closed curves around a common base point."""

    crossings: list[float]   # angles where the radial difference changes sign
    touches: list[float]     # tangential contacts (zero without sign change)
    coincident: bool
    containment: str | None  # "a_inside_b" | "b_inside_a" | None


def indicatrix_intersections(a, b, n: int = 720,
                             deadband: float = 1e-10) -> CurveComparison:
    """Compare two radial closed curves (indicatrices or reachable sets)
    around the same base point.

    Sign changes of the radial difference are bisected to 1e-8; zeros without
    a sign change are reported as touches.  Identical profiles set the
    coincident flag; nested profiles set the containment flag.
    """
    if (abs(a.point.x - b.point.x) > 0.0 or abs(a.point.y - b.point.y) > 0.0):
        raise ValueError("curves must share a base point")

    def diff(psi: float) -> float:
        return a.radial(psi) - b.radial(psi)

    psis = [_TWO_PI * k / n for k in range(n)]
    d = [diff(psi) for psi in psis]
    if max(abs(v) for v in d) <= deadband:
        return CurveComparison([], [], True, None)

    crossings = []
    touches = []
    seen_touch_cluster = False
    for k in range(n):
        k2 = (k + 1) % n
        d1, d2 = d[k], d[k2]
        p1 = psis[k]
        p2 = psis[k2] if k2 else _TWO_PI
        if (d1 > deadband and d2 < -deadband) or (d1 < -deadband and d2 > deadband):
            lo, hi, flo = p1, p2, d1
            while hi - lo > 1e-8:
                mid = 0.5 * (lo + hi)
                fm = diff(mid)
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            crossings.append((0.5 * (lo + hi)) % _TWO_PI)
            seen_touch_cluster = False
        elif abs(d1) <= deadband:
            if not seen_touch_cluster:
                touches.append(p1)
            seen_touch_cluster = True
        else:
            seen_touch_cluster = False

    containment = None
    if not crossings:
        if min(d) >= -deadband:
            containment = "b_inside_a"
        elif max(d) <= deadband:
            containment = "a_inside_b"
    return CurveComparison(crossings, touches, False, containment)


# -- point vs closed curve ----------------------------------------------------


def distance_to_closed_curve(vertices, q: tuple[float, float]) -> float:
    """Euclidean distance from q to a closed polygonal curve."""
    qx, qy = q
    best = math.inf
    m = len(vertices)
    for i in range(m):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % m]
        dx, dy = x2 - x1, y2 - y1
        den = dx * dx + dy * dy
        if den == 0.0:
            d = math.hypot(qx - x1, qy - y1)
        else:
            s = max(0.0, min(1.0, ((qx - x1) * dx + (qy - y1) * dy) / den))
            d = math.hypot(qx - x1 - s * dx, qy - y1 - s * dy)
        best = min(best, d)
    return best


def point_in_closed_curve(vertices, q: tuple[float, float],
                          slack: float = 0.0) -> bool:
    """Inclusive point-in-polygon test: True when q is inside the closed
    curve or within ``slack`` of its boundary.

    Uses the nonzero winding rule, which keeps swallowtail regions of
    self-intersecting extremal fronts (past focal points) classified as
    inside; curves are exported as drawn, never repaired.
    """
    if slack > 0.0 and distance_to_closed_curve(vertices, q) <= slack:
        return True
    qx, qy = q
    winding = 0
    m = len(vertices)
    for i in range(m):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % m]
        if y1 <= qy:
            if y2 > qy and (x2 - x1) * (qy - y1) - (y2 - y1) * (qx - x1) > 0.0:
                winding += 1
        elif y2 <= qy and (x2 - x1) * (qy - y1) - (y2 - y1) * (qx - x1) < 0.0:
            winding -= 1
    return winding != 0


# -- shooting -----------------------------------------------------------------


@dataclass(frozen=True)
class ShootingResult:
    """Best heading found toward a target, with its closest approach."""

    target: Point2
    phi0: float
    arrival_time: float
    miss: float          # terminal position error at the arrival time
    found: bool          # miss <= requested tolerance
    n_integrations: int

    def __bool__(self):
        return self.found


def _closest_approach(traj: Trajectory, target: Point2) -> tuple[float, float]:
    """(time, distance) of the closest point of a trajectory to the target,
    refined through the dense output around the best node."""
    tx, ty = target.x, target.y
    best_i = 0
    best_d = math.inf
    for i, s in enumerate(traj.states):
        d = math.hypot(s.p.x - tx, s.p.y - ty)
        if d < best_d:
            best_d, best_i = d, i
    lo = traj.times[max(0, best_i - 1)]
    hi = traj.times[min(len(traj.times) - 1, best_i + 1)]

    def dist(t: float) -> float:
        s = traj.state_at(t)
        return math.hypot(s[0] - tx, s[1] - ty)

    # golden-section refinement; the local minimum is unimodal on [lo, hi]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = dist(c), dist(d)
    for _ in range(60):
        if hi - lo < 1e-12 * max(1.0, hi):
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = dist(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = dist(d)
    t_best = c if fc < fd else d
    d_best = min(fc, fd)
    if best_d < d_best:
        return traj.times[best_i], best_d
    return t_best, d_best


def shoot_to_target(spray: SprayField, p0: Point2, target: Point2,
                    tolerance: float,
                    phi_bracket: tuple[float, float] = (0.0, _TWO_PI),
                    t_max: float = 6.0,
                    n_scan: int = 24,
                    control: StepControl | None = None) -> ShootingResult:
    """Find a launch angle whose geodesic passes within ``tolerance`` of the
    target.

    A coarse scan over the bracket seeds a golden-section minimization of the
    closest-approach distance; the global best over every evaluated heading
    is returned.  A miss beyond 10x tolerance is reported as not found, never
    raised.
    """
    ctl = control or StepControl(rtol=1e-8, atol=1e-11)
    counter = [0]
    cache: dict[float, tuple[float, float]] = {}

    def evaluate(phi: float) -> tuple[float, float]:
        if phi in cache:
            return cache[phi]
        counter[0] += 1
        ic = InitialCondition.from_heading(spray.metric, p0, phi)
        traj = integrate_geodesic(spray, ic, t_max, ctl)
        res = _closest_approach(traj, target)
        cache[phi] = res
        return res

    lo, hi = phi_bracket
    if not hi > lo:
        raise ValueError("empty heading bracket")
    ncand = max(4, n_scan)
    full_circle = abs((hi - lo) - _TWO_PI) < 1e-12
    step = (hi - lo) / (ncand if full_circle else ncand - 1)
    scan = [lo + k * step for k in range(ncand)]

    best_phi, (best_t, best_d) = scan[0], evaluate(scan[0])
    for phi in scan[1:]:
        t_c, d_c = evaluate(phi)
        if d_c < best_d:
            best_phi, best_t, best_d = phi, t_c, d_c

    # golden-section refinement between the neighbors of the best sample
    if full_circle:
        a, b = best_phi - step, best_phi + step
    else:
        a, b = max(lo, best_phi - step), min(hi, best_phi + step)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    (tc, fc), (td, fd) = evaluate(c), evaluate(d)
    for _ in range(80):
        if fc < best_d:
            best_phi, best_t, best_d = c, tc, fc
        if fd < best_d:
            best_phi, best_t, best_d = d, td, fd
        if (b - a) < 1e-7 or best_d < 0.25 * tolerance:
            break
        if fc < fd:
            b, d, td, fd = d, c, tc, fc
            c = b - invphi * (b - a)
            tc, fc = evaluate(c)
        else:
            a, c, tc, fc = c, d, td, fd
            d = a + invphi * (b - a)
            td, fd = evaluate(d)

    return ShootingResult(target, best_phi % _TWO_PI, best_t, best_d,
                          best_d <= tolerance, counter[0])


# -- transit-time comparison -----------------------------------------------------


FLAG_UNIT_LOCUS = "path on unit-speed locus"
FLAG_STRICT = "strict"
FLAG_MARGINAL = "marginal"
FLAG_UNAVAILABLE = "comparison-unavailable"


@dataclass(frozen=True)
class TransitComparison:
    p0: Point2
    target: Point2
    t_classical: float | None
    t_generalized: float | None
    gap: float | None
    flag: str
    classical: ShootingResult | None
    generalized: ShootingResult | None


def lemma_transit_comparison(data: NavigationData, p0: Point2, target: Point2,
                             tolerance: float,
                             classical_domain: Rect | None = None,
                             t_max: float = 6.0,
                             phi_bracket: tuple[float, float] = (0.0, _TWO_PI),
                             n_scan: int = 24,
                             control: StepControl | None = None,
                             ) -> TransitComparison:
    """Shoot to the same target under the given speed field and under the
    unit-speed comparison problem, and compare transit times.

    The generalized time can never undercut the classical one; equality (up
    to tolerance) requires the optimal path to stay where the speed is 1.
    """
    gen_metric = RandersMetric(data, tag="generalized")
    cls_metric = RandersMetric(data.with_unit_speed(classical_domain),
                               tag="classical")
    gen = shoot_to_target(SprayField(gen_metric), p0, target, tolerance,
                          phi_bracket, t_max, n_scan, control)
    cls = shoot_to_target(SprayField(cls_metric), p0, target, tolerance,
                          phi_bracket, t_max, n_scan, control)
    if not (gen.found and cls.found):
        return TransitComparison(p0, target, None, None, None,
                                 FLAG_UNAVAILABLE, cls, gen)
    gap = gen.arrival_time - cls.arrival_time

    # classify: does the generalized optimum run along the unit-speed locus?
    ic = InitialCondition.from_heading(gen_metric, p0, gen.phi0)
    traj = integrate_geodesic(SprayField(gen_metric), ic, gen.arrival_time,
                              control or StepControl(rtol=1e-8, atol=1e-11))
    off_unit = max(abs(data.speed.value(s.p) - 1.0) for s in traj.states)
    if off_unit <= 1e-9:
        flag = FLAG_UNIT_LOCUS
    elif gap > 1e-4:
        flag = FLAG_STRICT
    else:
        flag = FLAG_MARGINAL
    return TransitComparison(p0, target, cls.arrival_time, gen.arrival_time,
                             gap, flag, cls, gen)
