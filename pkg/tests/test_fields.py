import math

import numpy as np
import pytest

from zermelonav import (DomainError, LineSlice, Point2, Rect, ScalarField,
                        Tangent2)
from zermelonav.fields import MetricField

from conftest import make_data

# Full-precision mild-flow boundary of the quartic example, frozen from the
# bisection oracle (tol 1e-12) and confirmed by a 30-digit root find.
QUARTIC_BOUNDARY_Y = 1.2687678794366071


def test_h_norm_pythagorean(flat_data):
    assert flat_data.h_norm(Point2(0, 0), Tangent2(3.0, 4.0)) == 5.0


def test_h_norm_zero_vector(flat_data):
    assert flat_data.h_norm(Point2(1, 1), Tangent2(0.0, 0.0)) == 0.0


def test_h_norm_of_wind_vanishes_at_unit_y(quartic_data):
    p = Point2(0.0, 1.0)
    w = Tangent2(*quartic_data.wind.value(p))
    assert quartic_data.h_norm(p, w) == 0.0


def test_h_inner_orthogonality(flat_data):
    p = Point2(0, 0)
    assert flat_data.h_inner(p, Tangent2(1, 0), Tangent2(0, 1)) == 0.0
    assert flat_data.h_inner(p, Tangent2(2, 0), Tangent2(3, 0)) == 6.0


def test_h_inner_off_diagonal_metric():
    h = MetricField(ScalarField.constant(1.0), ScalarField.constant(0.5),
                    ScalarField.constant(1.0))
    data = make_data(h=h)
    assert data.h_inner(Point2(0, 0), Tangent2(1, 0), Tangent2(0, 1)) == 0.5


def test_h_inner_symmetry_is_exact():
    h = MetricField(ScalarField.from_expression("2 + sin(x)"),
                    ScalarField.from_expression("0.3 * cos(y)"),
                    ScalarField.from_expression("1.5 + 0.1 * x**2"))
    data = make_data(h=h, rect=Rect(-2, 2, -2, 2))
    rng = np.random.default_rng(5)
    for _ in range(200):
        p = Point2(*rng.uniform(-2, 2, size=2))
        a = Tangent2(*rng.uniform(-3, 3, size=2))
        b = Tangent2(*rng.uniform(-3, 3, size=2))
        assert data.h_inner(p, a, b) - data.h_inner(p, b, a) == 0.0


def test_h_inner_matches_norm_square(quartic_data):
    rng = np.random.default_rng(17)
    for _ in range(100):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        t = Tangent2(*rng.uniform(-2, 2, size=2))
        assert quartic_data.h_inner(p, t, t) == pytest.approx(
            quartic_data.h_norm(p, t) ** 2, rel=1e-12, abs=1e-15)


def test_positive_definiteness_sampled():
    h = MetricField(ScalarField.from_expression("2 + sin(x)"),
                    ScalarField.from_expression("0.3 * cos(y)"),
                    ScalarField.from_expression("1.5 + 0.1 * x**2"))
    data = make_data(h=h, rect=Rect(-2, 2, -2, 2))
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        p = Point2(*rng.uniform(-2, 2, size=2))
        h11, h12, h22 = data.h.entries(p)
        assert h11 > 0.0
        assert h11 * h22 - h12 * h12 > 0.0


def test_domain_error_outside_rectangle(quartic_data):
    with pytest.raises(DomainError):
        quartic_data.h_norm(Point2(0.0, 1.3), Tangent2(1, 0))


def test_scalar_field_gradient_invariant(quartic_data):
    # speed and wind components of the shipped example, 1e3 random points
    rng = np.random.default_rng(3)
    fields = [quartic_data.speed, quartic_data.wind.w1]
    hstep = 1e-5
    for _ in range(500):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.2, 1.2))
        for f in fields:
            v, (gx, gy) = f.value_and_grad(p)
            fx = (f.value(Point2(p.x + hstep, p.y))
                  - f.value(Point2(p.x - hstep, p.y))) / (2 * hstep)
            fy = (f.value(Point2(p.x, p.y + hstep))
                  - f.value(Point2(p.x, p.y - hstep))) / (2 * hstep)
            scale = max(1.0, abs(gx), abs(gy))
            assert abs(gx - fx) <= 1e-6 * scale
            assert abs(gy - fy) <= 1e-6 * scale


# -- mild-flow validation ------------------------------------------------------


def test_validate_convexity_shipped_domain_passes(quartic_data):
    assert quartic_data.validate_convexity(41, 41).ok


def test_validate_convexity_wide_domain_fails(quartic_data):
    wide = make_data(w1="0.8 * (1 - y**2)**2", speed="cos(y)",
                     rect=Rect(-10, 10, -1.35, 1.35))
    report = wide.validate_convexity(41, 41)
    assert not report.ok
    assert all(abs(v.point.y) > QUARTIC_BOUNDARY_Y - 1e-9
               for v in report.violations)


def test_validate_convexity_still_water():
    assert make_data().validate_convexity(5, 5).ok


def test_validate_speed_cap():
    fast = make_data(speed="1.5")
    report = fast.validate_convexity(3, 3)
    assert len(report.violations) == report.n_samples


# -- boundary roots --------------------------------------------------------------


def test_quartic_boundary_root(quartic_data):
    roots = quartic_data.convexity_boundary(LineSlice("y", 0.0, 0.0, 1.5),
                                            tol=1e-10)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(QUARTIC_BOUNDARY_Y, abs=1e-10)
    # the value the mild-flow margin quotes: ~1.27 to two decimals
    assert round(roots[0], 2) == 1.27


def test_cosine_boundary_root(conformal_data):
    roots = conformal_data.convexity_boundary(LineSlice("y", 0.0, 0.0, 2.0),
                                              tol=1e-10)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(math.pi / 2, abs=1e-10)


def test_no_sign_change_gives_empty(flat_data):
    assert flat_data.convexity_boundary(LineSlice("y", 0.0, 0.0, 2.0)) == []


# -- frames ----------------------------------------------------------------------


def test_orthonormal_frame_euclidean(flat_data):
    e1, e2 = flat_data.orthonormal_frame(Point2(0, 0))
    assert e1 == (1.0, 0.0)
    assert e2 == (0.0, 1.0)


def test_orthonormal_frame_general_metric():
    h = MetricField(ScalarField.from_expression("2 + sin(x)"),
                    ScalarField.from_expression("0.3 * cos(y)"),
                    ScalarField.from_expression("1.5 + 0.1 * x**2"))
    data = make_data(h=h, rect=Rect(-2, 2, -2, 2))
    rng = np.random.default_rng(31)
    for _ in range(50):
        p = Point2(*rng.uniform(-2, 2, size=2))
        e1, e2 = data.orthonormal_frame(p)
        t1, t2 = Tangent2(*e1), Tangent2(*e2)
        assert data.h_inner(p, t1, t1) == pytest.approx(1.0, rel=1e-12)
        assert data.h_inner(p, t2, t2) == pytest.approx(1.0, rel=1e-12)
        assert data.h_inner(p, t1, t2) == pytest.approx(0.0, abs=1e-12)


def test_grid_requires_two_per_axis(flat_data):
    with pytest.raises(ValueError):
        flat_data.domain.grid(1, 5)
