"""Forward-mode derivative propagation on plain floats.

Two small arithmetic types carry every derivative computed in this package;
finite differences appear only in tests, as an independent oracle.

``Dual2``
    value plus gradient with respect to the two chart coordinates (x, y).
    Used to evaluate scalar fields exactly.

``Jet4``
    truncated second-order value in the four tangent-bundle coordinates
    (x, y, u, v).  Only the Hessian entries that pair a velocity coordinate
    with anything (uu, uv, vv, xu, xv, yu, yv) are carried: the product and
    chain rules update each Hessian entry (i, j) from gradients i and j and
    the same entry of the operands, so this subset is closed under all the
    operations below, and the pure position block (xx, xy, yy) is never
    needed by the spray.

Both types are immutable and use plain Python floats throughout; on scalar
expressions of this size that is considerably faster than small ndarrays.
"""

from __future__ import annotations

import math

_NUM = (int, float)


class Dual2:
    """First-order value: f, df/dx, df/dy."""

    __slots__ = ("v", "gx", "gy")

    def __init__(self, v, gx=0.0, gy=0.0):
        self.v = v
        self.gx = gx
        self.gy = gy

    @staticmethod
    def var_x(x0):
        return Dual2(x0, 1.0, 0.0)

    @staticmethod
    def var_y(y0):
        return Dual2(y0, 0.0, 1.0)

    def __add__(self, o):
        if isinstance(o, _NUM):
            return Dual2(self.v + o, self.gx, self.gy)
        return Dual2(self.v + o.v, self.gx + o.gx, self.gy + o.gy)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, _NUM):
            return Dual2(self.v - o, self.gx, self.gy)
        return Dual2(self.v - o.v, self.gx - o.gx, self.gy - o.gy)

    def __rsub__(self, o):
        return Dual2(o - self.v, -self.gx, -self.gy)

    def __neg__(self):
        return Dual2(-self.v, -self.gx, -self.gy)

    def __mul__(self, o):
        if isinstance(o, _NUM):
            return Dual2(self.v * o, self.gx * o, self.gy * o)
        return Dual2(
            self.v * o.v,
            self.gx * o.v + self.v * o.gx,
            self.gy * o.v + self.v * o.gy,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, _NUM):
            return self * (1.0 / o)
        return self * o._recip()

    def __rtruediv__(self, o):
        return self._recip() * o

    def _recip(self):
        iv = 1.0 / self.v
        d = -iv * iv
        return Dual2(iv, d * self.gx, d * self.gy)

    def _chain(self, f0, f1):
        return Dual2(f0, f1 * self.gx, f1 * self.gy)

    def __pow__(self, p):
        if not isinstance(p, _NUM):
            raise TypeError("exponent must be a constant")
        if p == 0:
            return Dual2(1.0)
        if p == 1:
            return self
        if p == 2:
            return self._chain(self.v * self.v, 2.0 * self.v)
        if isinstance(p, int) or float(p).is_integer():
            p = int(p)
            return self._chain(self.v**p, p * self.v ** (p - 1))
        return self._chain(self.v**p, p * self.v ** (p - 1.0))

    def sqrt(self):
        s = math.sqrt(self.v)
        return self._chain(s, 0.5 / s)

    def cos(self):
        return self._chain(math.cos(self.v), -math.sin(self.v))

    def sin(self):
        return self._chain(math.sin(self.v), math.cos(self.v))

    def exp(self):
        e = math.exp(self.v)
        return self._chain(e, e)

    def __repr__(self):
        return f"Dual2({self.v!r}, {self.gx!r}, {self.gy!r})"


class Jet4:
    """Second-order value in (x, y, u, v) with the velocity-paired Hessian
    block (huu, huv, hvv, hxu, hxv, hyu, hyv)."""

    __slots__ = ("v", "gx", "gy", "gu", "gv",
                 "huu", "huv", "hvv", "hxu", "hxv", "hyu", "hyv")

    def __init__(self, v, gx=0.0, gy=0.0, gu=0.0, gv=0.0,
                 huu=0.0, huv=0.0, hvv=0.0,
                 hxu=0.0, hxv=0.0, hyu=0.0, hyv=0.0):
        self.v = v
        self.gx = gx
        self.gy = gy
        self.gu = gu
        self.gv = gv
        self.huu = huu
        self.huv = huv
        self.hvv = hvv
        self.hxu = hxu
        self.hxv = hxv
        self.hyu = hyu
        self.hyv = hyv

    @staticmethod
    def var_u(u0):
        return Jet4(u0, gu=1.0)

    @staticmethod
    def var_v(v0):
        return Jet4(v0, gv=1.0)

    @staticmethod
    def from_dual(d: Dual2) -> "Jet4":
        """Lift a position-only value; all velocity-paired entries vanish."""
        return Jet4(d.v, gx=d.gx, gy=d.gy)

    def __add__(self, o):
        if isinstance(o, _NUM):
            return Jet4(self.v + o, self.gx, self.gy, self.gu, self.gv,
                        self.huu, self.huv, self.hvv,
                        self.hxu, self.hxv, self.hyu, self.hyv)
        return Jet4(self.v + o.v,
                    self.gx + o.gx, self.gy + o.gy,
                    self.gu + o.gu, self.gv + o.gv,
                    self.huu + o.huu, self.huv + o.huv, self.hvv + o.hvv,
                    self.hxu + o.hxu, self.hxv + o.hxv,
                    self.hyu + o.hyu, self.hyv + o.hyv)

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __neg__(self):
        return Jet4(-self.v, -self.gx, -self.gy, -self.gu, -self.gv,
                    -self.huu, -self.huv, -self.hvv,
                    -self.hxu, -self.hxv, -self.hyu, -self.hyv)

    def __mul__(self, o):
        if isinstance(o, _NUM):
            return Jet4(self.v * o, self.gx * o, self.gy * o,
                        self.gu * o, self.gv * o,
                        self.huu * o, self.huv * o, self.hvv * o,
                        self.hxu * o, self.hxv * o,
                        self.hyu * o, self.hyv * o)
        av, bv = self.v, o.v
        return Jet4(
            av * bv,
            self.gx * bv + av * o.gx,
            self.gy * bv + av * o.gy,
            self.gu * bv + av * o.gu,
            self.gv * bv + av * o.gv,
            self.huu * bv + 2.0 * self.gu * o.gu + av * o.huu,
            self.huv * bv + self.gu * o.gv + self.gv * o.gu + av * o.huv,
            self.hvv * bv + 2.0 * self.gv * o.gv + av * o.hvv,
            self.hxu * bv + self.gx * o.gu + self.gu * o.gx + av * o.hxu,
            self.hxv * bv + self.gx * o.gv + self.gv * o.gx + av * o.hxv,
            self.hyu * bv + self.gy * o.gu + self.gu * o.gy + av * o.hyu,
            self.hyv * bv + self.gy * o.gv + self.gv * o.gy + av * o.hyv,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, _NUM):
            return self * (1.0 / o)
        return self * o._recip()

    def __rtruediv__(self, o):
        return self._recip() * o

    def _recip(self):
        iv = 1.0 / self.v
        return self._chain(iv, -iv * iv, 2.0 * iv * iv * iv)

    def _chain(self, f0, f1, f2):
        gx, gy, gu, gv = self.gx, self.gy, self.gu, self.gv
        return Jet4(
            f0,
            f1 * gx, f1 * gy, f1 * gu, f1 * gv,
            f1 * self.huu + f2 * gu * gu,
            f1 * self.huv + f2 * gu * gv,
            f1 * self.hvv + f2 * gv * gv,
            f1 * self.hxu + f2 * gx * gu,
            f1 * self.hxv + f2 * gx * gv,
            f1 * self.hyu + f2 * gy * gu,
            f1 * self.hyv + f2 * gy * gv,
        )

    def __pow__(self, p):
        if not isinstance(p, _NUM):
            raise TypeError("exponent must be a constant")
        if p == 0:
            return Jet4(1.0)
        if p == 1:
            return self
        v = self.v
        if p == 2:
            return self._chain(v * v, 2.0 * v, 2.0)
        if isinstance(p, int) or float(p).is_integer():
            p = int(p)
            return self._chain(v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))
        return self._chain(v**p, p * v ** (p - 1.0), p * (p - 1.0) * v ** (p - 2.0))

    def sqrt(self):
        s = math.sqrt(self.v)
        d1 = 0.5 / s
        return self._chain(s, d1, -0.5 * d1 / self.v)

    def cos(self):
        c, s = math.cos(self.v), math.sin(self.v)
        return self._chain(c, -s, -c)

    def sin(self):
        c, s = math.cos(self.v), math.sin(self.v)
        return self._chain(s, c, -s)

    def exp(self):
        e = math.exp(self.v)
        return self._chain(e, e, e)

    def __repr__(self):
        return (f"Jet4(v={self.v!r}, g=({self.gx!r}, {self.gy!r}, "
                f"{self.gu!r}, {self.gv!r}))")


def cos(z):
    return z.cos() if hasattr(z, "cos") else math.cos(z)


def sin(z):
    return z.sin() if hasattr(z, "sin") else math.sin(z)


def exp(z):
    return z.exp() if hasattr(z, "exp") else math.exp(z)


def sqrt(z):
    return z.sqrt() if hasattr(z, "sqrt") else math.sqrt(z)
