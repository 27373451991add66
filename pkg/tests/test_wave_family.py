import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from waves.errors import DegenerateRoots, DomainError, NearSolitaryWarning, NotInRegion, OutsideRegion
from waves.wave_family import (RegionClass, WaveParams, a_minus, a_plus, a_shape,
                               b_from_constant_period, boundary_b_minus, boundary_b_plus,
                               boundary_curves, classify, constant_period,
                               constant_period_from_b, critical_value_a, cubic_roots,
                               gv_nu, newton_potential, normalize_scaling, peaked_b,
                               peaked_period, require_interior, shape_threshold,
                               turning_points)


@pytest.mark.parametrize('c, expected', [(2.0, 32.0 / 27.0), (1.0, 4.0 / 27.0), (3.0, 4.0)])
def test_critical_value(c, expected):
    assert_allclose(critical_value_a(c), expected, rtol=1e-15)


def test_critical_value_rejects_bad_speed():
    with pytest.raises(DomainError):
        critical_value_a(0.0)


def test_cubic_roots_interior():
    roots = cubic_roots(0.4, 2.0)
    assert 0 < roots.phi1 < 2.0 / 3.0 < roots.phi2 < 2.0 < roots.phi3
    for phi in (roots.phi1, roots.phi2, roots.phi3):
        assert_allclose(phi * (2.0 - phi) ** 2, 0.4, rtol=1e-13)
    assert_allclose(roots.phi1 + roots.phi2 + roots.phi3, 4.0, rtol=1e-14)
    assert_allclose(roots.gap2, 2.0 - roots.phi2, rtol=1e-12)
    assert_allclose(roots.gap3, roots.phi3 - 2.0, rtol=1e-12)


def test_cubic_roots_near_corner():
    roots = cubic_roots((1.0 - 1e-8) * 32.0 / 27.0, 2.0)
    assert_allclose([roots.phi1, roots.phi2, roots.phi3], [2 / 3, 2 / 3, 8 / 3], atol=1e-3)


def test_cubic_roots_near_zero():
    roots = cubic_roots(1e-9, 2.0)
    assert_allclose([roots.phi1, roots.phi2, roots.phi3], [0.0, 2.0, 2.0], atol=1e-4)


@pytest.mark.parametrize('a', [0.0, -0.1, 1.3])
def test_cubic_roots_outside(a):
    with pytest.raises(OutsideRegion):
        cubic_roots(a, 2.0)


def test_cubic_roots_degenerate():
    with pytest.raises(DegenerateRoots):
        cubic_roots((1.0 - 1e-14) * 32.0 / 27.0, 2.0)


def test_boundaries_via_potential():
    p = WaveParams(0.4, 0.0, 2.0)
    roots = cubic_roots(p.a, p.c)
    assert_allclose(newton_potential(0.0, p), p.a / p.c, rtol=1e-15)
    assert_allclose(newton_potential(roots.phi2, p), boundary_b_minus(p.a, p.c), rtol=1e-12)
    assert_allclose(newton_potential(roots.phi1, p), boundary_b_plus(p.a, p.c), rtol=1e-12)


def test_potential_pole():
    with pytest.raises(DomainError):
        newton_potential(2.0, WaveParams(0.4, 0.0, 2.0))


def test_boundary_limits():
    assert_allclose(boundary_b_minus(1e-10, 2.0), -2.0, atol=1e-4)
    assert_allclose(boundary_b_plus(1e-10, 2.0), 0.0, atol=1e-9)
    a_near = (1.0 - 1e-8) * 32.0 / 27.0
    assert_allclose(boundary_b_minus(a_near, 2.0), 2.0 / 3.0, atol=1e-6)
    assert_allclose(boundary_b_plus(a_near, 2.0), 2.0 / 3.0, atol=1e-6)


def test_boundary_inverses():
    assert_allclose(a_minus(boundary_b_minus(0.4, 2.0), 2.0), 0.4, rtol=1e-12)
    assert_allclose(a_plus(boundary_b_plus(0.4, 2.0), 2.0), 0.4, rtol=1e-12)
    with pytest.raises(DomainError):
        a_plus(-0.1, 2.0)


@pytest.mark.parametrize('p, expected', [
    (WaveParams(0.4, 0.0, 2.0), RegionClass.INTERIOR),
    (WaveParams(0.0, -1.0, 2.0), RegionClass.BOUNDARY_PEAKED),
    (WaveParams(0.4, 10.0, 2.0), RegionClass.OUTSIDE),
    (WaveParams(0.4, boundary_b_minus(0.4, 2.0), 2.0), RegionClass.BOUNDARY_CONSTANT),
    (WaveParams(0.4, boundary_b_plus(0.4, 2.0), 2.0), RegionClass.BOUNDARY_SOLITARY),
    (WaveParams(0.0, -3.0, 2.0), RegionClass.OUTSIDE),
    (WaveParams(2.0, 0.0, 2.0), RegionClass.OUTSIDE),
    (WaveParams(0.4, 0.0, -2.0), RegionClass.OUTSIDE),
])
def test_classify(p, expected):
    assert classify(p) == expected


def test_classify_is_speed_invariant():
    for c in (0.5, 1.0, 3.0):
        scaled = WaveParams(0.05 * c ** 3, -0.05 * c ** 2, c)
        assert classify(scaled) == RegionClass.INTERIOR


def test_normalize_scaling():
    assert normalize_scaling(WaveParams(0.4, 0.0, 2.0)) == pytest.approx((0.05, 0.0))
    alpha, beta = normalize_scaling(WaveParams(32.0 / 27.0, 2.0 / 3.0, 2.0))
    assert_allclose([alpha, beta], [4.0 / 27.0, 1.0 / 6.0], rtol=1e-15)
    p = WaveParams(0.3, -0.7, 1.7)
    alpha, beta = normalize_scaling(p)
    assert_allclose([alpha * p.c ** 3, beta * p.c ** 2], [p.a, p.b], rtol=1e-15)


def test_turning_points_interior():
    p = WaveParams(0.4, 0.0, 2.0)
    roots = cubic_roots(p.a, p.c)
    tp = turning_points(p)
    assert roots.phi1 < tp.phi_minus < roots.phi2 < tp.phi_plus < p.c
    for phi in (tp.phi_minus, tp.phi_plus):
        assert_allclose((p.c - phi) * (2 * p.b + phi ** 2), 2 * p.a, rtol=1e-12)
    assert_allclose(tp.gap_plus, p.c - tp.phi_plus, rtol=1e-12)


def test_turning_points_limits():
    b_lo = boundary_b_minus(0.4, 2.0)
    tp = turning_points(WaveParams(0.4, b_lo, 2.0))
    assert tp.phi_minus == tp.phi_plus == cubic_roots(0.4, 2.0).phi2
    tp = turning_points(WaveParams(0.0, -0.5, 2.0))
    assert tp.phi_plus == 2.0
    assert_allclose(tp.phi_minus, 1.0, rtol=1e-15)
    with pytest.raises(NotInRegion):
        turning_points(WaveParams(0.0, 0.5, 2.0))
    with pytest.raises(NotInRegion):
        turning_points(WaveParams(0.4, 1.0, 2.0))


def test_near_solitary_warning():
    b_hi = boundary_b_plus(0.4, 2.0)
    with pytest.warns(NearSolitaryWarning):
        require_interior(WaveParams(0.4, b_hi - 1e-9, 2.0))
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        require_interior(WaveParams(0.4, b_hi - 1e-3, 2.0))


def test_limit_periods():
    assert_allclose(peaked_period(-0.5, 2.0), 2 * np.arccosh(2.0), rtol=1e-15)
    assert_allclose(peaked_b(2 * np.arccosh(2.0), 2.0), -0.5, rtol=1e-14)
    assert_allclose(constant_period_from_b(0.0, 2.0), 2 * np.pi / np.sqrt(3), rtol=1e-15)
    assert_allclose(constant_period(a_minus(0.0, 2.0), 2.0), 2 * np.pi / np.sqrt(3), rtol=1e-12)
    assert_allclose(b_from_constant_period(2 * np.pi / np.sqrt(3), 2.0), 0.0, atol=1e-14)
    b = b_from_constant_period(np.pi, 2.0)
    assert_allclose(constant_period_from_b(b, 2.0), np.pi, rtol=1e-13)


def test_a_shape_and_nu():
    threshold = shape_threshold(2.0)
    assert_allclose(threshold, -(1 - np.sqrt(2 / 3)) * 4, rtol=1e-15)
    assert a_shape(-1.2, 2.0) == 'increasing'
    assert a_shape(-0.6, 2.0) == 'single_maximum'
    assert a_shape(0.0, 2.0) == 'decreasing'
    assert_allclose(gv_nu(0.0, 2.0), 1.0 / 6.0, rtol=1e-15)
    assert_allclose(gv_nu(-2.0, 2.0), 0.0, atol=1e-15)
    assert_allclose(gv_nu(threshold, 2.0), -0.1 + np.sqrt(6) / 15, rtol=1e-12)


def test_boundary_curves_corner():
    curves = boundary_curves(2.0, 20)
    assert_allclose(curves['corner'], (32.0 / 27.0, 2.0 / 3.0), rtol=1e-15)
    assert np.all(curves['b_minus'] < curves['b_plus'])
    assert curves['peaked_b'][0] == -2.0 and curves['peaked_b'][-1] == 0.0


@pytest.mark.parametrize('p, expected', [
    (WaveParams(1e-14, -0.1, 1.0), RegionClass.BOUNDARY_PEAKED),
    (WaveParams(1e-14, 0.3, 1.0), RegionClass.OUTSIDE),
    (WaveParams((1.0 - 1e-13) * 4.0 / 27.0, 0.0, 1.0), RegionClass.OUTSIDE),
])
def test_classify_with_tiny_tolerance(p, expected):
    assert classify(p, tol=1e-16) == expected


def test_cubic_roots_ordering_on_random_samples():
    rng = np.random.default_rng(2022)
    for _ in range(200):
        c = rng.uniform(0.2, 5.0)
        a = rng.uniform(1e-6, 1.0 - 1e-6) * critical_value_a(c)
        roots = cubic_roots(a, c)
        assert 0 < roots.phi1 < c / 3 < roots.phi2 < c < roots.phi3


def test_classify_scaling_invariance_on_random_samples():
    rng = np.random.default_rng(31)
    seen = set()
    for _ in range(200):
        c = rng.uniform(0.2, 5.0)
        alpha, beta = rng.uniform(-0.02, 0.17), rng.uniform(-0.6, 0.3)
        p = WaveParams(alpha * c ** 3, beta * c ** 2, c)
        a_n, b_n = normalize_scaling(p)
        region = classify(p)
        assert region == classify(WaveParams(a_n, b_n, 1.0))
        seen.add(region)
    assert {RegionClass.INTERIOR, RegionClass.OUTSIDE} <= seen
