"""Navigation data on a 2D chart: background metric, flow field, speed field.

A problem instance is the triple (h, W, speed) on an axis-aligned rectangle:
``h`` a Riemannian background metric, ``W`` the flow (wind or current), and
``speed`` the ship's own speed through the medium.  The admissibility
condition is the mild-flow inequality |W(p)|_h < speed(p) <= 1 at every point,
which is what :meth:`NavigationData.validate_convexity` samples and
:meth:`NavigationData.convexity_boundary` locates precisely along a line.

All evaluations are pure; instances are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ConvexityError, DomainError
from .expressions import Const, Expr, parse_expression
from .jets import Dual2


@dataclass(frozen=True)
class Point2:
    """Chart position."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("point coordinates must be finite")


@dataclass(frozen=True)
class Tangent2:
    """Velocity components at a point (per unit time)."""

    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("tangent components must be finite")

    def is_zero(self) -> bool:
        return self.u == 0.0 and self.v == 0.0


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle of validity."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("rectangle must have positive extent")

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def grid(self, nx: int, ny: int) -> list[tuple[float, float]]:
        """Row-major sampling grid including both edges; nx, ny >= 2."""
        if nx < 2 or ny < 2:
            raise ValueError("grid resolution must be >= 2 per axis")
        xs = [self.xmin + (self.xmax - self.xmin) * i / (nx - 1) for i in range(nx)]
        ys = [self.ymin + (self.ymax - self.ymin) * j / (ny - 1) for j in range(ny)]
        return [(x, y) for y in ys for x in xs]


class ScalarField:
    """A closed-form scalar field with exact first derivatives.

    Wraps an expression tree in the chart coordinates; gradients come from
    forward-mode propagation, never finite differences.
    """

    def __init__(self, expr: Expr):
        self.expr = expr

    @classmethod
    def from_expression(cls, text: str, constants=None) -> "ScalarField":
        return cls(parse_expression(text, constants))

    @classmethod
    def constant(cls, value: float) -> "ScalarField":
        return cls(Const(float(value)))

    def value(self, p: Point2) -> float:
        return self.expr.eval(p.x, p.y)

    def value_and_grad(self, p: Point2) -> tuple[float, tuple[float, float]]:
        d = self.expr.eval(Dual2.var_x(p.x), Dual2.var_y(p.y))
        if isinstance(d, Dual2):
            return d.v, (d.gx, d.gy)
        return d, (0.0, 0.0)  # constant expression

    def eval(self, x, y):
        """Evaluate over an arbitrary scalar algebra (float, Dual2, Jet4)."""
        return self.expr.eval(x, y)

    def is_constant(self) -> bool:
        return isinstance(self.expr, Const)

    def __repr__(self):
        return f"ScalarField({self.expr})"


class VectorField:
    """Two scalar components (W1, W2) of the flow."""

    def __init__(self, w1: ScalarField, w2: ScalarField):
        self.w1 = w1
        self.w2 = w2

    @classmethod
    def from_expressions(cls, w1: str, w2: str, constants=None) -> "VectorField":
        return cls(ScalarField.from_expression(w1, constants),
                   ScalarField.from_expression(w2, constants))

    @classmethod
    def zero(cls) -> "VectorField":
        return cls(ScalarField.constant(0.0), ScalarField.constant(0.0))

    def value(self, p: Point2) -> tuple[float, float]:
        return self.w1.value(p), self.w2.value(p)


class MetricField:
    """Symmetric 2x2 background metric, positive definite where evaluated."""

    def __init__(self, h11: ScalarField, h12: ScalarField, h22: ScalarField):
        self.h11 = h11
        self.h12 = h12
        self.h22 = h22

    @classmethod
    def euclidean(cls) -> "MetricField":
        return cls(ScalarField.constant(1.0),
                   ScalarField.constant(0.0),
                   ScalarField.constant(1.0))

    def entries(self, p: Point2) -> tuple[float, float, float]:
        h11 = self.h11.value(p)
        h12 = self.h12.value(p)
        h22 = self.h22.value(p)
        if h11 <= 0.0 or h11 * h22 - h12 * h12 <= 0.0:
            raise ConvexityError(
                f"background metric not positive definite at ({p.x}, {p.y})")
        return h11, h12, h22

    def is_constant(self) -> bool:
        return (self.h11.is_constant() and self.h12.is_constant()
                and self.h22.is_constant())


@dataclass(frozen=True)
class ConvexityViolation:
    point: Point2
    wind_norm: float
    speed: float


@dataclass(frozen=True)
class ConvexityReport:
    """Outcome of sampling the mild-flow condition on a grid."""

    n_samples: int
    violations: list[ConvexityViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class LineSlice:
    """A 1D slice of the chart: ``vary`` in [lo, hi], other coordinate fixed."""

    vary: str  # "x" or "y"
    fixed: float
    lo: float
    hi: float

    def point(self, s: float) -> Point2:
        if self.vary == "y":
            return Point2(self.fixed, s)
        return Point2(s, self.fixed)


class NavigationData:
    """The problem triple (h, W, speed) plus its rectangle of validity."""

    def __init__(self, h: MetricField, wind: VectorField, speed: ScalarField,
                 domain: Rect):
        self.h = h
        self.wind = wind
        self.speed = speed
        self.domain = domain

    # -- basic metric algebra ------------------------------------------------

    def require_inside(self, p: Point2) -> None:
        if not self.domain.contains(p.x, p.y):
            raise DomainError(
                f"point ({p.x}, {p.y}) outside domain rectangle "
                f"[{self.domain.xmin}, {self.domain.xmax}] x "
                f"[{self.domain.ymin}, {self.domain.ymax}]")

    def h_inner(self, p: Point2, a: Tangent2, b: Tangent2) -> float:
        """Bilinear form h(a, b) at p."""
        self.require_inside(p)
        h11, h12, h22 = self.h.entries(p)
        return h11 * a.u * b.u + h12 * (a.u * b.v + a.v * b.u) + h22 * a.v * b.v

    def h_norm(self, p: Point2, t: Tangent2) -> float:
        """Norm |t|_h at p; zero iff t is the zero vector."""
        self.require_inside(p)
        h11, h12, h22 = self.h.entries(p)
        q = h11 * t.u * t.u + 2.0 * h12 * t.u * t.v + h22 * t.v * t.v
        return math.sqrt(q) if q > 0.0 else 0.0

    def wind_norm(self, p: Point2) -> float:
        return self.h_norm(p, Tangent2(*self.wind.value(p)))

    def orthonormal_frame(self, p: Point2):
        """Columns (e1, e2) with h(ei, ej) = delta_ij, from the Cholesky
        factor of h at p.  Identity for the Euclidean background."""
        h11, h12, h22 = self.h.entries(p)
        c11 = math.sqrt(h11)
        c21 = h12 / c11
        c22 = math.sqrt(h22 - c21 * c21)
        return (1.0 / c11, 0.0), (-c21 / (c11 * c22), 1.0 / c22)

    def heading_vector(self, p: Point2, phi: float) -> Tangent2:
        """Unit-h vector at chart angle phi in the h-orthonormal frame."""
        e1, e2 = self.orthonormal_frame(p)
        c, s = math.cos(phi), math.sin(phi)
        return Tangent2(c * e1[0] + s * e2[0], c * e1[1] + s * e2[1])

    # -- admissibility -------------------------------------------------------

    def validate_convexity(self, nx: int = 41, ny: int = 41) -> ConvexityReport:
        """Sample the mild-flow condition |W|_h < speed and 0 < speed <= 1.

        Violations are reported as data, not raised.
        """
        violations = []
        samples = self.domain.grid(nx, ny)
        for x, y in samples:
            p = Point2(x, y)
            w = self.wind_norm(p)
            s = self.speed.value(p)
            if not (0.0 < s <= 1.0) or w >= s:
                violations.append(ConvexityViolation(p, w, s))
        return ConvexityReport(len(samples), violations)

    def convexity_boundary(self, sl: LineSlice, subdivisions: int = 256,
                           tol: float = 1e-10) -> list[float]:
        """Roots of speed - |W|_h along a line slice, by bracketed bisection.

        Returns slice parameters where the margin changes sign, each accurate
        to ``tol``; empty when there is no sign change.  The slice may extend
        beyond the domain rectangle: the closed-form fields are global, and
        the interesting root is usually just outside the rectangle.
        """

        def margin(s: float) -> float:
            p = sl.point(s)
            w1, w2, u, h11, h12, h22 = self.fields_at(p.x, p.y)
            q = h11 * w1 * w1 + 2.0 * h12 * w1 * w2 + h22 * w2 * w2
            return u - math.sqrt(q) if q > 0.0 else u

        roots = []
        prev_s = sl.lo
        prev_f = margin(prev_s)
        for i in range(1, subdivisions + 1):
            s = sl.lo + (sl.hi - sl.lo) * i / subdivisions
            f = margin(s)
            if prev_f == 0.0:
                roots.append(prev_s)
            elif prev_f * f < 0.0:
                a, b, fa = prev_s, s, prev_f
                while b - a > tol:
                    m = 0.5 * (a + b)
                    fm = margin(m)
                    if fm == 0.0:
                        a = b = m
                        break
                    if fa * fm < 0.0:
                        b = m
                    else:
                        a, fa = m, fm
                roots.append(0.5 * (a + b))
            prev_s, prev_f = s, f
        if prev_f == 0.0:
            roots.append(prev_s)
        return roots

    # -- derived problems ----------------------------------------------------

    def with_unit_speed(self, domain: Rect | None = None) -> "NavigationData":
        """The classical variant: same (h, W) with speed frozen at 1.

        The classical admissibility region |W|_h < 1 is usually larger, so a
        wider rectangle may be supplied.
        """
        return NavigationData(self.h, self.wind, ScalarField.constant(1.0),
                              domain or self.domain)

    # -- internal fast-path probes (floats / jets) ----------------------------

    def fields_at(self, x, y):
        """Evaluate (w1, w2, U, h11, h12, h22) over a scalar algebra."""
        return (self.wind.w1.eval(x, y), self.wind.w2.eval(x, y),
                self.speed.eval(x, y),
                self.h.h11.eval(x, y), self.h.h12.eval(x, y),
                self.h.h22.eval(x, y))

    def mild_flow_margin(self, x: float, y: float) -> float:
        """speed - |W|_h on raw floats, without the domain gate."""
        w1, w2, u, h11, h12, h22 = self.fields_at(x, y)
        q = h11 * w1 * w1 + 2.0 * h12 * w1 * w2 + h22 * w2 * w2
        return u - math.sqrt(q) if q > 0.0 else u


def euclidean_problem(wind: VectorField, speed: ScalarField,
                      domain: Rect) -> NavigationData:
    """Convenience constructor for the flat background."""
    return NavigationData(MetricField.euclidean(), wind, speed, domain)


def heading_grid(n: int, start: float = 0.0) -> list[float]:
    """n headings equally spaced on [0, 2*pi)."""
    return [start + 2.0 * math.pi * k / n for k in range(n)]
