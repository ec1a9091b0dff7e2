import math

import numpy as np
import pytest

from zermelonav import (ConvexityError, DegenerateVectorError, Point2,
                        RandersMetric, ReconstructionError, Rect, Tangent2,
                        reconstruct_navigation, resultant_speed)

from conftest import fd_jet, make_data, rel_err


@pytest.fixture(scope="module")
def conformal_metric(conformal_data):
    return RandersMetric(conformal_data)


# -- resultant speed ----------------------------------------------------------


def test_resultant_speed_downwind(quartic_data):
    # |W|=0.8, speed=1 at the origin
    assert resultant_speed(quartic_data, Point2(0, 0), 0.0) == pytest.approx(1.8)


def test_resultant_speed_upwind(quartic_data):
    assert resultant_speed(quartic_data, Point2(0, 0), math.pi) == pytest.approx(0.2)


def test_resultant_speed_no_flow():
    data = make_data(speed="0.7")
    for theta in (0.0, 1.0, 2.5, math.pi):
        assert resultant_speed(data, Point2(1, 1), theta) == pytest.approx(0.7)


def test_resultant_speed_requires_mild_flow():
    data = make_data(w1="0.9", speed="0.5")
    with pytest.raises(ConvexityError):
        resultant_speed(data, Point2(0, 0), 0.0)


# -- the norm -------------------------------------------------------------------


def test_norm_reduces_to_h_norm_without_flow(flat_data):
    m = RandersMetric(flat_data)
    assert m.F(Point2(0, 0), Tangent2(3.0, 4.0)) == pytest.approx(5.0)


def test_norm_worked_value_at_origin(quartic_metric):
    assert quartic_metric.F(Point2(0, 0), Tangent2(1.8, 0.0)) == pytest.approx(
        1.0, abs=1e-14)


def test_norm_conformal_point(quartic_metric):
    # the flow vanishes at y=1, leaving |t|/speed
    got = quartic_metric.F(Point2(0.0, 1.0), Tangent2(1.0, 0.0))
    assert got == pytest.approx(1.0 / math.cos(1.0), rel=1e-14)


def test_norm_zero_vector_and_positivity(quartic_metric):
    rng = np.random.default_rng(2)
    for _ in range(100):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        assert quartic_metric.F(p, Tangent2(0.0, 0.0)) == 0.0
        t = Tangent2(*rng.uniform(-2, 2, size=2))
        if not t.is_zero():
            assert quartic_metric.F(p, t) > 0.0


def test_norm_positive_homogeneity(quartic_metric):
    rng = np.random.default_rng(8)
    for _ in range(1000):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        t = Tangent2(*rng.uniform(-2, 2, size=2))
        if t.is_zero():
            continue
        f = quartic_metric.F(p, t)
        for c in (0.5, 2.0, 10.0):
            fc = quartic_metric.F(p, Tangent2(c * t.u, c * t.v))
            assert rel_err(fc, c * f, floor=1e-30) <= 1e-12


def test_unit_resultant_translate_property(quartic_metric):
    from zermelonav import initial_velocity
    rng = np.random.default_rng(13)
    for _ in range(50):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        for k in range(64):
            t = initial_velocity(quartic_metric.data, p, 2 * math.pi * k / 64)
            assert abs(quartic_metric.F(p, t) - 1.0) <= 1e-10


def test_norm_monotone_in_speed_and_classical_at_unit():
    # fixed backdrop and vector, speed swept over constants
    values = []
    for s in (0.85, 0.9, 1.0):
        data = make_data(w1="0.8 * (1 - y**2)**2", speed=repr(s),
                         rect=Rect(-10, 10, -1.25, 1.25))
        values.append(RandersMetric(data).F(Point2(0.0, 0.5), Tangent2(0.7, -0.3)))
    assert values[0] > values[1] > values[2]

    # at s=1 the norm is the classical one (flat-background explicit form)
    data = make_data(w1="0.8 * (1 - y**2)**2", speed="1",
                     rect=Rect(-10, 10, -1.25, 1.25))
    m = RandersMetric(data)
    rng = np.random.default_rng(21)
    for _ in range(300):
        x, y = rng.uniform(-5, 5), rng.uniform(-1.25, 1.25)
        u, v = rng.uniform(-2, 2, size=2)
        if u == 0.0 and v == 0.0:
            continue
        w1 = 0.8 * (1 - y * y) ** 2
        classical = (math.sqrt((u * u + v * v) - (-v * w1) ** 2) - u * w1) \
            / (1.0 - w1 * w1)
        assert rel_err(m.F(Point2(x, y), Tangent2(u, v)), classical,
                       floor=1e-30) <= 1e-12


# -- decomposition -----------------------------------------------------------------


def test_decompose_no_flow_unit_speed(flat_data):
    d = RandersMetric(flat_data).decompose(Point2(0.3, -0.4))
    assert (d.a11, d.a12, d.a22) == (1.0, 0.0, 1.0)
    assert (d.b1, d.b2) == (-0.0, -0.0)
    assert d.lam == 1.0


def test_decompose_conformal(conformal_metric):
    p = Point2(0.0, 0.7)
    d = conformal_metric.decompose(p)
    c2 = math.cos(0.7) ** 2
    assert d.a11 == pytest.approx(1.0 / c2, rel=1e-14)
    assert d.a22 == pytest.approx(1.0 / c2, rel=1e-14)
    assert d.a12 == 0.0
    assert d.b1 == d.b2 == -0.0


def test_decompose_worked_values(quartic_metric):
    d = quartic_metric.decompose(Point2(0.0, 0.0))
    assert d.lam == pytest.approx(0.36, rel=1e-14)
    assert d.b1 == pytest.approx(-0.8 / 0.36, rel=1e-14)
    assert d.b2 == 0.0
    assert d.a11 == pytest.approx(1 / 0.36 + 0.64 / 0.36 ** 2, rel=1e-14)


def test_decomposition_identity_and_strong_convexity(quartic_metric):
    rng = np.random.default_rng(11)
    for _ in range(1000):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        d = quartic_metric.decompose(p)
        ang = rng.uniform(0, 2 * math.pi)
        r = 10.0 ** rng.uniform(-1, 1)
        t = Tangent2(r * math.cos(ang), r * math.sin(ang))
        assert rel_err(d.alpha_beta(t), quartic_metric.F(p, t),
                       floor=1e-30) <= 1e-12
        assert d.a11 > 0.0 and d.a_determinant() > 0.0
        assert d.b_norm_sq() < 1.0


def test_effective_wind(quartic_metric, conformal_metric):
    ew = quartic_metric.effective_wind(Point2(0.0, 0.0))
    assert (ew.w1, ew.w2) == (0.8, 0.0)
    ew = conformal_metric.effective_wind(Point2(0.0, 1.0))
    assert (ew.w1, ew.w2) == (0.0, 0.0)


def test_effective_wind_rescaling_breaks_convexity():
    # halving the speed under the same flow violates admissibility, and the
    # rescaled flow says so: |effective| >= 1
    data = make_data(w1="0.8", speed="0.5")
    m = RandersMetric(data)
    ew = m.effective_wind(Point2(0, 0))
    assert (ew.w1, ew.w2) == (1.6, 0.0)
    assert math.hypot(ew.w1, ew.w2) >= 1.0
    with pytest.raises(ConvexityError):
        m.F(Point2(0, 0), Tangent2(1, 0))


def test_effective_wind_inside_unit_ball(quartic_metric):
    rng = np.random.default_rng(23)
    for _ in range(200):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        ew = quartic_metric.effective_wind(p)
        assert quartic_metric.data.h_norm(p, Tangent2(ew.w1, ew.w2)) < 1.0


# -- jets -------------------------------------------------------------------------


def test_jet_flat_quadratic(flat_data):
    j = RandersMetric(flat_data).jet(Point2(0.5, -1.0), Tangent2(0.7, 0.3))
    assert j.L == pytest.approx(0.5 * (0.7 ** 2 + 0.3 ** 2))
    assert (j.Lx, j.Ly) == (0.0, 0.0)
    assert (j.Luu, j.Lvv, j.Luv) == (1.0, 1.0, 0.0)
    assert (j.Lxu, j.Lxv, j.Lyu, j.Lyv) == (0.0, 0.0, 0.0, 0.0)


def test_jet_conformal_closed_form(conformal_metric):
    # L = (u^2+v^2) / (2 cos^2 y): Ly = (u^2+v^2) tan(y) / cos^2(y)
    rng = np.random.default_rng(4)
    for _ in range(50):
        x, y = rng.uniform(-2, 2), rng.uniform(-1.4, 1.4)
        u, v = rng.uniform(-2, 2, size=2)
        if u == 0.0 and v == 0.0:
            continue
        j = conformal_metric.jet(Point2(x, y), Tangent2(u, v))
        q = u * u + v * v
        cy = math.cos(y)
        assert j.L == pytest.approx(q / (2 * cy * cy), rel=1e-13)
        assert j.Ly == pytest.approx(q * math.tan(y) / cy ** 2, rel=1e-12)
        assert j.Lx == 0.0
        assert j.Luu == pytest.approx(1.0 / cy ** 2, rel=1e-13)
        assert j.Luv == 0.0


def test_jet_matches_finite_differences(quartic_metric):
    rng = np.random.default_rng(42)
    for _ in range(100):
        x = rng.uniform(-3, 3)
        y = rng.uniform(-1.2, 1.2)
        ang = rng.uniform(0, 2 * math.pi)
        r = rng.uniform(0.5, 2.0)
        u, v = r * math.cos(ang), r * math.sin(ang)
        j = quartic_metric.jet(Point2(x, y), Tangent2(u, v))
        fd = fd_jet(quartic_metric, x, y, u, v, h=1e-5)
        for key, val in fd.items():
            assert rel_err(getattr(j, key), val) <= 1e-5, key


def test_jet_fundamental_form_positive(quartic_metric):
    rng = np.random.default_rng(77)
    for _ in range(1000):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        ang = rng.uniform(0, 2 * math.pi)
        r = 10.0 ** rng.uniform(-1, 1)
        j = quartic_metric.jet(p, Tangent2(r * math.cos(ang), r * math.sin(ang)))
        assert j.Luu > 0.0
        assert j.fundamental_determinant() > 0.0


def test_jet_rejects_zero_vector(quartic_metric):
    with pytest.raises(DegenerateVectorError):
        quartic_metric.jet(Point2(0, 0), Tangent2(0.0, 0.0))


# -- reconstruction ------------------------------------------------------------------


def test_reconstruct_identity_round_trip(flat_data):
    d = RandersMetric(flat_data).decompose(Point2(0, 0))
    (h11, h12, h22), (w1, w2) = reconstruct_navigation(d, 1.0)
    assert (h11, h12, h22) == pytest.approx((1.0, 0.0, 1.0), rel=1e-12)
    assert (w1, w2) == pytest.approx((0.0, 0.0), abs=1e-15)


def test_reconstruct_quartic_origin(quartic_metric):
    d = quartic_metric.decompose(Point2(0.0, 0.0))
    (h11, h12, h22), (w1, w2) = reconstruct_navigation(d, 1.0)
    assert (h11, h12, h22) == pytest.approx((1.0, 0.0, 1.0), rel=1e-12)
    assert w1 == pytest.approx(0.8, rel=1e-12)
    assert w2 == pytest.approx(0.0, abs=1e-15)


def test_reconstruct_conformal(conformal_metric):
    d = conformal_metric.decompose(Point2(0.0, 1.0))
    (h11, h12, h22), (w1, w2) = reconstruct_navigation(d, math.cos(1.0))
    assert (h11, h12, h22) == pytest.approx((1.0, 0.0, 1.0), rel=1e-12)
    assert (w1, w2) == pytest.approx((0.0, 0.0), abs=1e-15)


def test_reconstruct_round_trip_random(quartic_metric):
    rng = np.random.default_rng(19)
    for _ in range(200):
        p = Point2(rng.uniform(-5, 5), rng.uniform(-1.25, 1.25))
        d = quartic_metric.decompose(p)
        s = quartic_metric.data.speed.value(p)
        (h11, h12, h22), (w1, w2) = reconstruct_navigation(d, s)
        assert rel_err(h11, 1.0) <= 1e-10
        assert abs(h12) <= 1e-10
        assert rel_err(h22, 1.0) <= 1e-10
        assert rel_err(w1, quartic_metric.data.wind.w1.value(p)) <= 1e-10
        assert abs(w2) <= 1e-10


def test_reconstruct_rejects_bad_inputs(quartic_metric):
    d = quartic_metric.decompose(Point2(0.0, 0.0))
    with pytest.raises(ReconstructionError):
        reconstruct_navigation(d, 0.0)
    with pytest.raises(ReconstructionError):
        reconstruct_navigation(d, 1.5)
    # a 1-form too long for any admissible flow
    from zermelonav import RandersDecomposition
    bad = RandersDecomposition(Point2(0, 0), 1.0, 0.0, 1.0, 1.1, 0.0, 0.36)
    with pytest.raises(ReconstructionError):
        reconstruct_navigation(bad, 1.0)


# -- memoized evaluation -----------------------------------------------------------


def test_memo_cache_is_transparent(quartic_data):
    plain = RandersMetric(quartic_data)
    memo = RandersMetric(quartic_data, memoize=True)
    p = Point2(0.4, 0.9)
    for t in (Tangent2(1, 0), Tangent2(0.2, -2.0), Tangent2(-1, 1)):
        assert memo.F(p, t) == plain.F(p, t)
        assert memo.jet(p, t) == plain.jet(p, t)
