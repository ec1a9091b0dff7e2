"""Geodesic spray of the travel-time norm and time-optimal path integration.

With L = F^2/2 the spray coefficients of a 2D Finsler norm are

    G1 = ( Lvv*(Lxu*u + Lyu*v - Lx) - Luv*(Lxv*u + Lyv*v - Ly) ) / (2*D),
    G2 = ( Luu*(Lxv*u + Lyv*v - Ly) - Luv*(Lxu*u + Lyu*v - Lx) ) / (2*D),

with D = Luu*Lvv - Luv^2 > 0 on the strongly convex region.  Time-optimal
paths solve the first-order system

    x' = u,  y' = v,  u' = -2*G1,  v' = -2*G2,

which is integrated by an adaptive embedded Dormand-Prince 5(4) pair (FSAL)
with cubic Hermite dense output on every accepted step.  Leaving the domain
rectangle, approaching the convexity boundary, and step-size underflow all
terminate a run gracefully with a recorded reason; partial trajectories are
returned, not raised.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .errors import ConvexityError, DegeneracyError
from .fields import NavigationData, Point2, Tangent2
from .randers import RandersMetric

REASON_TIME = "time_reached"
REASON_DOMAIN = "left_domain"
REASON_CONVEXITY = "convexity_violated"
REASON_STEP = "step_failure"


def initial_velocity(data: NavigationData, p0: Point2, phi0: float) -> Tangent2:
    """Launch velocity for control angle phi0: W(p0) + speed(p0) * e(phi0),
    with e(phi0) the unit heading in the h-orthonormal frame.  The result has
    unit travel-time norm."""
    data.require_inside(p0)
    w1, w2 = data.wind.value(p0)
    s = data.speed.value(p0)
    w = data.h_norm(p0, Tangent2(w1, w2))
    if w >= s or s <= 0.0:
        raise ConvexityError(
            f"mild-flow condition fails at ({p0.x}, {p0.y}): |W|={w}, speed={s}")
    e = data.heading_vector(p0, phi0)
    return Tangent2(w1 + s * e.u, w2 + s * e.v)


@dataclass(frozen=True)
class InitialCondition:
    """Start point, control angle in [0, 2*pi), and the derived velocity."""

    p0: Point2
    phi0: float
    velocity: Tangent2

    @classmethod
    def from_heading(cls, metric: RandersMetric, p0: Point2,
                     phi0: float) -> "InitialCondition":
        vel = initial_velocity(metric.data, p0, phi0)
        f = metric.F(p0, vel)
        if abs(f - 1.0) > 1e-10:
            raise AssertionError(f"launch velocity has norm {f}, expected 1")
        return cls(p0, phi0 % (2.0 * math.pi), vel)


@dataclass(frozen=True)
class StepControl:
    """Local error tolerances and step-size limits for the integrator."""

    rtol: float = 1e-9
    atol: float = 1e-12
    h_init: float | None = None
    h_min: float = 1e-13
    max_steps: int = 1_000_000


@dataclass(frozen=True)
class GeodesicState:
    p: Point2
    t: Tangent2
    time: float


class Trajectory:
    """Time-parametrized geodesic with per-step samples and diagnostics.

    ``times``/``states`` hold every accepted step; ``f_speeds`` the norm of
    the velocity at each sample (constant 1 up to integration drift for a
    unit launch).  Dense output between samples is cubic Hermite.
    """

    def __init__(self, times, raw_states, raw_derivs, f_speeds, reason,
                 n_steps, n_rejected, max_error_estimate):
        self.times = times
        self._ys = raw_states
        self._fs = raw_derivs
        self.f_speeds = f_speeds
        self.reason = reason
        self.n_steps = n_steps
        self.n_rejected = n_rejected
        self.max_error_estimate = max_error_estimate
        self.states = [
            GeodesicState(Point2(yy[0], yy[1]), Tangent2(yy[2], yy[3]), tt)
            for tt, yy in zip(times, raw_states)
        ]

    @property
    def final_time(self) -> float:
        return self.times[-1]

    @property
    def final_state(self) -> GeodesicState:
        return self.states[-1]

    def speed_drift(self) -> float:
        """Largest relative deviation of the norm from its launch value."""
        f0 = self.f_speeds[0]
        return max(abs(f - f0) for f in self.f_speeds) / abs(f0)

    def state_at(self, t: float):
        """Interpolated (x, y, u, v) at time t within the integrated range."""
        ts = self.times
        if not ts[0] <= t <= ts[-1]:
            raise ValueError(f"time {t} outside integrated range [{ts[0]}, {ts[-1]}]")
        i = bisect_right(ts, t) - 1
        if i >= len(ts) - 1:
            return self._ys[-1]
        return _hermite(ts[i], ts[i + 1], self._ys[i], self._ys[i + 1],
                        self._fs[i], self._fs[i + 1], t)

    def position_at(self, t: float) -> Point2:
        s = self.state_at(t)
        return Point2(s[0], s[1])


def _hermite(t0, t1, y0, y1, f0, f1, t):
    h = t1 - t0
    th = (t - t0) / h
    th2 = th * th
    th3 = th2 * th
    c00 = 2.0 * th3 - 3.0 * th2 + 1.0
    c10 = (th3 - 2.0 * th2 + th) * h
    c01 = -2.0 * th3 + 3.0 * th2
    c11 = (th3 - th2) * h
    return tuple(c00 * y0[i] + c10 * f0[i] + c01 * y1[i] + c11 * f1[i]
                 for i in range(4))


class SprayField:
    """Spray coefficient evaluator bound to one metric."""

    def __init__(self, metric: RandersMetric):
        self.metric = metric

    def coefficients(self, p: Point2, t: Tangent2) -> tuple[float, float]:
        """(G1, G2) at (p, t); positively 2-homogeneous in t."""
        self.metric.data.require_inside(p)
        return self._coeffs_raw(p.x, p.y, t.u, t.v)

    def _coeffs_raw(self, x, y, u, v):
        (_L, Lx, Ly, _Lu, _Lv,
         Luu, Luv, Lvv, Lxu, Lxv, Lyu, Lyv) = self.metric._jet_raw(x, y, u, v)
        det = Luu * Lvv - Luv * Luv
        if det < 1e-12:
            raise DegeneracyError(
                f"fundamental form degenerate at ({x}, {y}): det={det}")
        a = Lxu * u + Lyu * v - Lx
        b = Lxv * u + Lyv * v - Ly
        half = 0.5 / det
        return (Lvv * a - Luv * b) * half, (Luu * b - Luv * a) * half

    def _rhs(self, x, y, u, v):
        g1, g2 = self._coeffs_raw(x, y, u, v)
        return (u, v, -2.0 * g1, -2.0 * g2)


# Dormand-Prince 5(4) tableau (FSAL; the propagated solution is 5th order).
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def _attempt_step(rhs, y, k1, h):
    """One trial step; returns y1, k7 (= rhs at y1, FSAL), scaled error vector."""
    y2 = tuple(y[i] + h * _A21 * k1[i] for i in range(4))
    k2 = rhs(*y2)
    y3 = tuple(y[i] + h * (_A31 * k1[i] + _A32 * k2[i]) for i in range(4))
    k3 = rhs(*y3)
    y4 = tuple(y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
               for i in range(4))
    k4 = rhs(*y4)
    y5 = tuple(y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i]
                           + _A54 * k4[i]) for i in range(4))
    k5 = rhs(*y5)
    y6 = tuple(y[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                           + _A64 * k4[i] + _A65 * k5[i]) for i in range(4))
    k6 = rhs(*y6)
    y1 = tuple(y[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                           + _B5 * k5[i] + _B6 * k6[i]) for i in range(4))
    k7 = rhs(*y1)
    err = tuple(h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                     + _E6 * k6[i] + _E7 * k7[i]) for i in range(4))
    return y1, k7, err


def _error_norm(err, y0, y1, rtol, atol):
    acc = 0.0
    for i in range(4):
        sc = atol + rtol * max(abs(y0[i]), abs(y1[i]))
        r = err[i] / sc
        acc += r * r
    return math.sqrt(acc / 4.0)


def _initial_step(rhs, y, f, rtol, atol, t_end):
    sc = [atol + rtol * abs(y[i]) for i in range(4)]
    d0 = math.sqrt(sum((y[i] / sc[i]) ** 2 for i in range(4)) / 4.0)
    d1 = math.sqrt(sum((f[i] / sc[i]) ** 2 for i in range(4)) / 4.0)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_end)
    try:
        y1 = tuple(y[i] + h0 * f[i] for i in range(4))
        f1 = rhs(*y1)
    except (ConvexityError, DegeneracyError):
        return max(1e-8, h0 * 1e-3)
    d2 = math.sqrt(sum(((f1[i] - f[i]) / sc[i]) ** 2 for i in range(4)) / 4.0) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, t_end)


def _exit_state(domain, t0, t1, y0, y1, f0, f1):
    """Dense-output state at the domain boundary, found by bisection on the
    containment predicate (y0 inside, y1 outside)."""
    lo, hi = t0, t1
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        s = _hermite(t0, t1, y0, y1, f0, f1, mid)
        if domain.contains(s[0], s[1]):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(t1)):
            break
    return lo, _hermite(t0, t1, y0, y1, f0, f1, lo)


def integrate_geodesic(spray: SprayField, ic: InitialCondition, t_end: float,
                       control: StepControl | None = None) -> Trajectory:
    """Integrate the time-optimal path ODE from ic up to time t_end.

    Terminates early (with the reason recorded on the returned trajectory)
    when the state leaves the domain rectangle, when the strong-convexity
    boundary makes the spray degenerate, or when the step size underflows.
    The domain check wins ties: an accepted state outside the rectangle stops
    the run as "left_domain" before any convexity probing.
    """
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    ctl = control or StepControl()
    rhs = spray._rhs
    metric = spray.metric
    domain = metric.data.domain

    y = (ic.p0.x, ic.p0.y, ic.velocity.u, ic.velocity.v)
    metric.data.require_inside(ic.p0)
    f = rhs(*y)

    times = [0.0]
    ys = [y]
    fs = [f]
    f_speeds = [metric._F_raw(*y)]

    t = 0.0
    h = ctl.h_init or _initial_step(rhs, y, f, ctl.rtol, ctl.atol, t_end)
    n_steps = 0
    n_rejected = 0
    max_err = 0.0
    reason = REASON_TIME

    while t < t_end:
        if n_steps + n_rejected >= ctl.max_steps:
            reason = REASON_STEP
            break
        h = min(h, t_end - t)
        try:
            y1, k7, err = _attempt_step(rhs, y, f, h)
        except (ConvexityError, DegeneracyError):
            n_rejected += 1
            h *= 0.5
            if h < ctl.h_min:
                # Domain-first tie break: probe a minimal Euler step.
                xp = y[0] + ctl.h_min * f[0]
                yp = y[1] + ctl.h_min * f[1]
                reason = (REASON_DOMAIN if not domain.contains(xp, yp)
                          else REASON_CONVEXITY)
                break
            continue
        enorm = _error_norm(err, y, y1, ctl.rtol, ctl.atol)
        if enorm > 1.0:
            n_rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * enorm ** -0.2)
            if h < ctl.h_min:
                reason = REASON_STEP
                break
            continue
        # accepted
        n_steps += 1
        max_err = max(max_err, enorm)
        t1 = t + h
        if not domain.contains(y1[0], y1[1]):
            t_exit, y_exit = _exit_state(domain, t, t1, y, y1, f, k7)
            if t_exit > t:
                times.append(t_exit)
                ys.append(y_exit)
                fs.append(rhs(*y_exit))
                f_speeds.append(metric._F_raw(*y_exit))
            reason = REASON_DOMAIN
            break
        times.append(t1)
        ys.append(y1)
        fs.append(k7)
        f_speeds.append(metric._F_raw(*y1))
        t, y, f = t1, y1, k7
        if enorm == 0.0:
            h *= _MAX_FACTOR
        else:
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * enorm ** -0.2))

    return Trajectory(times, ys, fs, f_speeds, reason,
                      n_steps, n_rejected, max_err)


def transit_time(traj: Trajectory) -> float:
    """Total travel time of an integrated path (its final parameter value).

    Because geodesics launched with unit norm keep unit norm, this coincides
    with the norm-length of the path; :func:`path_time_integral` recomputes
    that length by quadrature for cross-checking.
    """
    return traj.final_time


def path_time_integral(traj: Trajectory) -> float:
    """Trapezoid quadrature of the norm of the velocity along the path."""
    total = 0.0
    for i in range(len(traj.times) - 1):
        dt = traj.times[i + 1] - traj.times[i]
        total += 0.5 * dt * (traj.f_speeds[i] + traj.f_speeds[i + 1])
    return total


def integrate_fan(spray: SprayField, p0: Point2, phis, t_end: float,
                  control: StepControl | None = None) -> list[Trajectory]:
    """Integrate one geodesic per heading; results in input order.

    Runs are independent of each other (pure evaluations, private state) and
    may be distributed across workers by callers; this reference
    implementation runs them sequentially.
    """
    out = []
    for phi in phis:
        ic = InitialCondition.from_heading(spray.metric, p0, phi)
        out.append(integrate_geodesic(spray, ic, t_end, control))
    return out
