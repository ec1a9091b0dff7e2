"""The travel-time norm of a navigation problem and its exact derivatives.

For navigation data (h, W, speed) the time needed to traverse a tangent
vector y at p is a Finsler norm of Randers type,

    F(p, y) = (sqrt(h(W, y)^2 + |y|_h^2 * lam) - h(W, y)) / lam,

with lam = speed^2 - |W|_h^2 > 0 under the mild-flow condition.  F splits as
alpha + beta, the norm of a modified Riemannian metric plus a 1-form:

    a_ij = h_ij / lam + (W_i / lam)(W_j / lam),     b_i = -W_i / lam,

where W_i = h_ij W^j.  Both the norm and the decomposition are evaluated
here, together with the second-order jet of L = F^2 / 2 that the geodesic
spray consumes.  Jets come from forward-mode propagation (:mod:`.jets`)
through the closed form, so the second derivatives are exact up to roundoff;
finite differences appear only in tests.

A ``RandersMetric`` is immutable after construction and all evaluations are
pure.  The optional per-point memo for field evaluations is lock-protected,
so instances stay safe to share across threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .errors import (ConvexityError, DegenerateVectorError, DomainError,
                     ReconstructionError)
from .fields import NavigationData, Point2, Tangent2
from .jets import Dual2, Jet4

# Absolute slack distinguishing roundoff from a genuine convexity violation
# when the square-root argument dips below zero.
_SQRT_SLACK = 1e-14


def resultant_speed(data: NavigationData, p: Point2, theta: float) -> float:
    """Ground speed |v|_h of a ship holding relative angle theta to the flow.

    theta is the h-angle between the composed velocity and W.  Strictly
    positive under the mild-flow condition.
    """
    data.require_inside(p)
    w = data.wind_norm(p)
    s = data.speed.value(p)
    if w >= s or s <= 0.0:
        raise ConvexityError(
            f"mild-flow condition fails at ({p.x}, {p.y}): |W|={w}, speed={s}")
    c = w * math.cos(theta)
    return c + math.sqrt(c * c + s * s - w * w)


@dataclass(frozen=True)
class RandersDecomposition:
    """Pointwise data of F = alpha + beta: the modified metric a_ij, the
    1-form b_i, and lam = speed^2 - |W|_h^2."""

    point: Point2
    a11: float
    a12: float
    a22: float
    b1: float
    b2: float
    lam: float

    def alpha_beta(self, t: Tangent2) -> float:
        """Evaluate alpha(t) + beta(t)."""
        q = (self.a11 * t.u * t.u + 2.0 * self.a12 * t.u * t.v
             + self.a22 * t.v * t.v)
        return math.sqrt(q) + self.b1 * t.u + self.b2 * t.v

    def a_determinant(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a12

    def b_norm_sq(self) -> float:
        """Squared a-norm of the 1-form, a^{ij} b_i b_j; < 1 iff strongly
        convex."""
        det = self.a_determinant()
        return (self.a22 * self.b1 * self.b1
                - 2.0 * self.a12 * self.b1 * self.b2
                + self.a11 * self.b2 * self.b2) / det


@dataclass(frozen=True)
class EffectiveWind:
    """Flow rescaled by the ship speed; reduces the problem to unit speed."""

    point: Point2
    w1: float
    w2: float


@dataclass(frozen=True)
class SecondOrderJet:
    """Value and derivatives of L = F^2 / 2 at one (p, t)."""

    L: float
    Lx: float
    Ly: float
    Lu: float
    Lv: float
    Luu: float
    Luv: float
    Lvv: float
    Lxu: float
    Lxv: float
    Lyu: float
    Lyv: float

    def fundamental_determinant(self) -> float:
        return self.Luu * self.Lvv - self.Luv * self.Luv


def _as_jet(z) -> Jet4:
    return Jet4.from_dual(z) if isinstance(z, Dual2) else Jet4(float(z))


class RandersMetric:
    """Evaluator for the travel-time norm of one navigation problem.

    ``tag`` labels the variant in exported data ("generalized" for a true
    speed field, "classical" for the unit-speed comparison problem).
    """

    def __init__(self, data: NavigationData, tag: str = "generalized",
                 memoize: bool = False):
        self.data = data
        self.tag = tag
        self._memo = {} if memoize else None
        self._lock = threading.Lock() if memoize else None

    # -- field evaluation ------------------------------------------------------

    def _fields(self, x: float, y: float):
        """(w1, w2, U, h11, h12, h22) as floats."""
        if self._memo is None:
            return self.data.fields_at(x, y)
        key = (x, y, False)
        with self._lock:
            hit = self._memo.get(key)
        if hit is None:
            hit = self.data.fields_at(x, y)
            with self._lock:
                if len(self._memo) > 1024:
                    self._memo.clear()
                self._memo[key] = hit
        return hit

    def _fields_dual(self, x: float, y: float):
        """Same fields carrying exact position gradients."""
        if self._memo is None:
            return self.data.fields_at(Dual2.var_x(x), Dual2.var_y(y))
        key = (x, y, True)
        with self._lock:
            hit = self._memo.get(key)
        if hit is None:
            hit = self.data.fields_at(Dual2.var_x(x), Dual2.var_y(y))
            with self._lock:
                if len(self._memo) > 1024:
                    self._memo.clear()
                self._memo[key] = hit
        return hit

    # -- norm ------------------------------------------------------------------

    def _F_raw(self, x: float, y: float, u: float, v: float) -> float:
        """Norm on raw floats; skips the domain gate (integrator stages may
        probe slightly outside the rectangle)."""
        w1, w2, U, h11, h12, h22 = self._fields(x, y)
        W_1 = h11 * w1 + h12 * w2
        W_2 = h12 * w1 + h22 * w2
        lam = U * U - (w1 * W_1 + w2 * W_2)
        if lam <= 0.0:
            raise ConvexityError(
                f"mild-flow condition fails at ({x}, {y}): lam={lam}")
        wy = W_1 * u + W_2 * v
        yh2 = h11 * u * u + 2.0 * h12 * u * v + h22 * v * v
        disc = wy * wy + yh2 * lam
        if disc < 0.0:
            if disc < -_SQRT_SLACK:
                raise ConvexityError(
                    f"square root argument {disc} negative at ({x}, {y})")
            disc = 0.0
        return (math.sqrt(disc) - wy) / lam

    def F(self, p: Point2, t: Tangent2) -> float:
        """Travel time per unit of the vector t at p).

        Positively 1-homogeneous in t; F(p, 0) = 0; positive for t != 0
        wherever the mild-flow condition holds.
        """
        self.data.require_inside(p)
        return self._F_raw(p.x, p.y, t.u, t.v)

    def resultant_velocity(self, p: Point2, phi: float) -> Tangent2:
        """Composed ground velocity W(p) + speed(p) * e(phi), components in
        the h-orthonormal frame.  Satisfies F = 1 by construction."""
        self.data.require_inside(p)
        w1, w2 = self.data.wind.value(p)
        s = self.data.speed.value(p)
        e = self.data.heading_vector(p, phi)
        return Tangent2(w1 + s * e.u, w2 + s * e.v)

    # -- decomposition -----------------------------------------------------------

    def decompose(self, p: Point2) -> RandersDecomposition:
        """Split F = alpha + beta at p."""
        self.data.require_inside(p)
        w1, w2, U, h11, h12, h22 = self._fields(p.x, p.y)
        W_1 = h11 * w1 + h12 * w2
        W_2 = h12 * w1 + h22 * w2
        lam = U * U - (w1 * W_1 + w2 * W_2)
        if lam <= 0.0:
            raise ConvexityError(
                f"mild-flow condition fails at ({p.x}, {p.y}): lam={lam}")
        il = 1.0 / lam
        return RandersDecomposition(
            point=p,
            a11=h11 * il + W_1 * W_1 * il * il,
            a12=h12 * il + W_1 * W_2 * il * il,
            a22=h22 * il + W_2 * W_2 * il * il,
            b1=-W_1 * il,
            b2=-W_2 * il,
            lam=lam,
        )

    def effective_wind(self, p: Point2) -> EffectiveWind:
        """W divided by the ship speed at p."""
        self.data.require_inside(p)
        s = self.data.speed.value(p)
        if s <= 0.0:
            raise DomainError(f"ship speed {s} not positive at ({p.x}, {p.y})")
        w1, w2 = self.data.wind.value(p)
        return EffectiveWind(p, w1 / s, w2 / s)

    # -- jets --------------------------------------------------------------------

    def _jet_raw(self, x: float, y: float, u: float, v: float):
        """L = F^2/2 with first and velocity-paired second derivatives, as a
        plain tuple (see SecondOrderJet for the entry order)."""
        if u == 0.0 and v == 0.0:
            raise DegenerateVectorError(
                "the squared norm is not twice differentiable at t = 0")
        w1d, w2d, Ud, h11d, h12d, h22d = self._fields_dual(x, y)
        W1 = _as_jet(w1d)
        W2 = _as_jet(w2d)
        U = _as_jet(Ud)
        h11 = _as_jet(h11d)
        h12 = _as_jet(h12d)
        h22 = _as_jet(h22d)
        uj = Jet4.var_u(u)
        vj = Jet4.var_v(v)

        W_1 = h11 * W1 + h12 * W2
        W_2 = h12 * W1 + h22 * W2
        lam = U * U - (W1 * W_1 + W2 * W_2)
        if lam.v <= 0.0:
            raise ConvexityError(
                f"mild-flow condition fails at ({x}, {y}): lam={lam.v}")
        wy = W_1 * uj + W_2 * vj
        yh2 = (h11 * uj) * uj + (2.0 * h12 * uj) * vj + (h22 * vj) * vj
        disc = wy * wy + yh2 * lam
        F = (disc.sqrt() - wy) / lam
        L = (F * F) * 0.5
        return (L.v, L.gx, L.gy, L.gu, L.gv,
                L.huu, L.huv, L.hvv, L.hxu, L.hxv, L.hyu, L.hyv)

    def jet(self, p: Point2, t: Tangent2) -> SecondOrderJet:
        """Exact second-order jet of L = F^2/2 at (p, t), t != 0."""
        self.data.require_inside(p)
        return SecondOrderJet(*self._jet_raw(p.x, p.y, t.u, t.v))


def reconstruct_navigation(decomp: RandersDecomposition, speed: float):
    """Invert a decomposition back to (h entries, W components).

    The inverse is a one-parameter family indexed by the ship speed at the
    base point, so ``speed`` in (0, 1] must be supplied.  Returns
    ((h11, h12, h22), (w1, w2)).
    """
    if not (0.0 < speed <= 1.0):
        raise ReconstructionError(f"speed must lie in (0, 1], got {speed}")
    adet = decomp.a_determinant()
    if decomp.a11 <= 0.0 or adet <= 0.0:
        raise ReconstructionError("decomposition metric not positive definite")
    rho = decomp.b_norm_sq()
    if rho >= 1.0:
        raise ReconstructionError(
            f"1-form has a-norm {math.sqrt(rho)} >= 1; no admissible flow")
    lam = speed * speed * (1.0 - rho)
    W_1 = -lam * decomp.b1
    W_2 = -lam * decomp.b2
    il = 1.0 / lam
    h11 = lam * decomp.a11 - W_1 * W_1 * il
    h12 = lam * decomp.a12 - W_1 * W_2 * il
    h22 = lam * decomp.a22 - W_2 * W_2 * il
    hdet = h11 * h22 - h12 * h12
    if h11 <= 0.0 or hdet <= 0.0:
        raise ReconstructionError("reconstructed background not positive definite")
    w1 = (h22 * W_1 - h12 * W_2) / hdet
    w2 = (h11 * W_2 - h12 * W_1) / hdet
    return (h11, h12, h22), (w1, w2)
