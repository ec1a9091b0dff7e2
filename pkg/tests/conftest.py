import math
from pathlib import Path

import pytest

from zermelonav import (NavigationData, Point2, RandersMetric, Rect,
                        ScalarField, SprayField, VectorField, load_problem)

REPO = Path(__file__).resolve().parent.parent
CONFIGS = REPO / "configs"
DATA = Path(__file__).resolve().parent / "data"

# Classical admissibility (|W| < 1) of the quartic flow holds out to
# |y| ~ 1.4555, so the unit-speed comparison problem gets a wider rectangle.
CLASSICAL_RECT = Rect(-10.0, 10.0, -1.4, 1.4)


@pytest.fixture(scope="session")
def quartic_data() -> NavigationData:
    return load_problem(CONFIGS / "quartic.cfg").data


@pytest.fixture(scope="session")
def quartic_metric(quartic_data) -> RandersMetric:
    return RandersMetric(quartic_data)


@pytest.fixture(scope="session")
def quartic_spray(quartic_metric) -> SprayField:
    return SprayField(quartic_metric)


@pytest.fixture(scope="session")
def classical_metric(quartic_data) -> RandersMetric:
    return RandersMetric(quartic_data.with_unit_speed(CLASSICAL_RECT),
                         tag="classical")


@pytest.fixture(scope="session")
def classical_spray(classical_metric) -> SprayField:
    return SprayField(classical_metric)


@pytest.fixture(scope="session")
def conformal_data() -> NavigationData:
    return load_problem(CONFIGS / "conformal.cfg").data


@pytest.fixture(scope="session")
def flat_data() -> NavigationData:
    return load_problem(CONFIGS / "flat.cfg").data


def make_data(w1="0", w2="0", speed="1", rect=Rect(-5, 5, -5, 5),
              constants=None, h=None) -> NavigationData:
    """Ad-hoc problem builder for tests."""
    from zermelonav.fields import MetricField
    wind = VectorField(ScalarField.from_expression(w1, constants),
                       ScalarField.from_expression(w2, constants))
    spd = ScalarField.from_expression(speed, constants)
    return NavigationData(h or MetricField.euclidean(), wind, spd, rect)


def fd_jet(metric, x, y, u, v, h=1e-5):
    """Finite-difference jet of L = F^2/2 on the norm-evaluation path; the
    independent oracle for the forward-mode jets."""

    def L(x_, y_, u_, v_):
        return 0.5 * metric._F_raw(x_, y_, u_, v_) ** 2

    def d2(fp, fm, f0):
        return (fp - 2.0 * f0 + fm) / (h * h)

    def dmix(fpp, fpm, fmp, fmm):
        return (fpp - fpm - fmp + fmm) / (4.0 * h * h)

    f0 = L(x, y, u, v)
    return {
        "L": f0,
        "Lx": (L(x + h, y, u, v) - L(x - h, y, u, v)) / (2 * h),
        "Ly": (L(x, y + h, u, v) - L(x, y - h, u, v)) / (2 * h),
        "Lu": (L(x, y, u + h, v) - L(x, y, u - h, v)) / (2 * h),
        "Lv": (L(x, y, u, v + h) - L(x, y, u, v - h)) / (2 * h),
        "Luu": d2(L(x, y, u + h, v), L(x, y, u - h, v), f0),
        "Lvv": d2(L(x, y, u, v + h), L(x, y, u, v - h), f0),
        "Luv": dmix(L(x, y, u + h, v + h), L(x, y, u + h, v - h),
                    L(x, y, u - h, v + h), L(x, y, u - h, v - h)),
        "Lxu": dmix(L(x + h, y, u + h, v), L(x + h, y, u - h, v),
                    L(x - h, y, u + h, v), L(x - h, y, u - h, v)),
        "Lxv": dmix(L(x + h, y, u, v + h), L(x + h, y, u, v - h),
                    L(x - h, y, u, v + h), L(x - h, y, u, v - h)),
        "Lyu": dmix(L(x, y + h, u + h, v), L(x, y + h, u - h, v),
                    L(x, y - h, u + h, v), L(x, y - h, u - h, v)),
        "Lyv": dmix(L(x, y + h, u, v + h), L(x, y + h, u, v - h),
                    L(x, y - h, u, v + h), L(x, y - h, u, v - h)),
    }


def fd_spray(metric, x, y, u, v, h=1e-4):
    """Spray coefficients assembled from the finite-difference jet through
    the same rational formula; the oracle for the exact-jet spray."""
    j = fd_jet(metric, x, y, u, v, h)
    det = j["Luu"] * j["Lvv"] - j["Luv"] ** 2
    a = j["Lxu"] * u + j["Lyu"] * v - j["Lx"]
    b = j["Lxv"] * u + j["Lyv"] * v - j["Ly"]
    return ((j["Lvv"] * a - j["Luv"] * b) / (2.0 * det),
            (j["Luu"] * b - j["Luv"] * a) / (2.0 * det))


def rel_err(a, b, floor=1.0):
    """|a - b| relative to max(floor, |a|, |b|); the floor avoids 0/0 at
    symmetry points where exact values vanish."""
    return abs(a - b) / max(floor, abs(a), abs(b))


def assert_angle_in(angle, expected, tol=1e-6):
    two_pi = 2.0 * math.pi
    assert any(abs((angle - e + math.pi) % two_pi - math.pi) <= tol
               for e in expected), f"angle {angle} not in {expected}"
