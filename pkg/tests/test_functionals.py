import numpy as np
import pytest
from numpy.testing import assert_allclose

from waves import functionals
from waves.errors import (DerivativeFailure, DomainError, NearSolitaryWarning, NoSolution,
                          SingularFamily)
from waves.functionals import (ProjectionMatrix2, conserved, conserved_on_grid,
                               dphi_squared_integral, euler_lagrange_residual,
                               fold_on_curve, higher_functional, kmm_identity_gap,
                               mass_energy, matrix_P, matrix_S, negative_direction,
                               orbital_sign_checks, stability_scan, upsilon_form)
from waves.profile import fixed_period_b, fixed_period_curve, period_derivatives, sample_profile
from waves.wave_family import WaveParams, constant_period, cubic_roots, peaked_period


@pytest.fixture(scope='module')
def family_sample():
    return fixed_period_curve(np.pi, 2.0, 5)[2]


def test_quadrature_matches_grid(interior_profile):
    p = interior_profile.params
    grid = conserved_on_grid(interior_profile)
    mass, energy = mass_energy(p)
    assert_allclose(mass, grid.mass, rtol=1e-10)
    assert_allclose(energy, grid.energy, rtol=1e-10)
    assert_allclose(higher_functional(p), grid.higher, rtol=1e-10)
    h = interior_profile.period_L / interior_profile.n_points
    assert_allclose(dphi_squared_integral(p), h * np.sum(interior_profile.dphi ** 2), rtol=1e-10)


def test_conserved_constant_wave(constant_params, constant_profile):
    phi2 = cubic_roots(constant_params.a, constant_params.c).phi2
    L = constant_period(constant_params.a, constant_params.c)
    triple = conserved(constant_profile)
    assert_allclose(triple.mass, L * phi2, rtol=1e-13)
    assert_allclose(triple.energy, 0.5 * L * phi2 ** 2, rtol=1e-13)
    assert_allclose(triple.higher, 0.5 * L * phi2 ** 3, rtol=1e-13)
    assert set(triple.to_dict()) == {'mass', 'energy', 'higher'}


def test_peaked_closed_forms_are_the_limit():
    c, b = 2.0, -0.5
    t = np.tanh(0.5 * peaked_period(b, c))
    mass, energy = mass_energy(WaveParams(0.0, b, c))
    assert_allclose([mass, energy], [2 * c * t, c * c * t], rtol=1e-15)
    near = mass_energy(WaveParams(1e-9, b, c))
    assert_allclose(near, (mass, energy), rtol=1e-3)
    assert_allclose(higher_functional(WaveParams(1e-9, b, c)),
                    higher_functional(WaveParams(0.0, b, c)), rtol=1e-3)


def test_speed_scaling_of_mass_and_energy():
    m2, e2 = mass_energy(WaveParams(0.4, 0.0, 2.0))
    m1, e1 = mass_energy(WaveParams(0.05, 0.0, 1.0))
    assert_allclose(m2 / m1, 2.0, rtol=1e-11)
    assert_allclose(e2 / e1, 4.0, rtol=1e-11)


def test_profile_solves_the_euler_lagrange_equation(interior_profile, constant_profile):
    assert euler_lagrange_residual(interior_profile) < 1e-9
    assert euler_lagrange_residual(constant_profile) < 1e-12


def test_kmm_identity(interior_profile, constant_profile):
    assert kmm_identity_gap(interior_profile) < 1e-8
    assert kmm_identity_gap(constant_profile) < 1e-9


def test_orbital_signs_constant_wave(constant_params, constant_profile):
    a, c = constant_params.a, constant_params.c
    phi2 = cubic_roots(a, c).phi2
    L = constant_period(a, c)
    kmm, _ = orbital_sign_checks(constant_profile)
    assert_allclose(kmm, a * a * L * (c - 3 * phi2) / (c - phi2) ** 2, rtol=1e-10)


def test_orbital_signs_near_solitary():
    # phi1 = 1/3 and b_+ = 1/2 at this a
    p = WaveParams(25.0 / 27.0, 0.5 - 1e-9, 2.0)
    with pytest.warns(NearSolitaryWarning):
        kmm, _ = orbital_sign_checks(sample_profile(p, 256))
    assert kmm > 0


def test_orbital_sign_turns_only_at_the_solitary_edge():
    p = WaveParams(25.0 / 27.0, 0.5 - 1e-3, 2.0)
    kmm, _ = orbital_sign_checks(sample_profile(p, 256))
    assert kmm < 0


def test_matrix_P_determinant(family_sample):
    P = matrix_P(family_sample, np.pi)
    assert P.which == 'P'
    assert P.det < 0
    assert P.details['relative_gap'] < 1e-4
    assert P.details['d_ratio'] < 0
    halved = matrix_P(family_sample, np.pi, h=0.5e-5)
    assert_allclose(halved.det, P.det, rtol=1e-5)


def test_negative_direction(family_sample):
    P = matrix_P(family_sample, np.pi)
    r, s = negative_direction(P)
    assert_allclose(r * r + s * s, 1.0, rtol=1e-12)
    assert upsilon_form(P, r, s) < 0


def test_negative_direction_missing():
    P = ProjectionMatrix2(entries=np.eye(2), det=1.0, which='P')
    with pytest.raises(NoSolution):
        negative_direction(P)


def test_matrix_P_off_family(family_sample):
    off = WaveParams(family_sample.a, family_sample.b * 0.9, family_sample.c)
    with pytest.raises(DomainError):
        matrix_P(off, np.pi)


def test_stability_scan_short_period():
    curve = stability_scan(0.5 * np.pi, 2.0, 8)
    assert curve.verdict == 'Stable'
    assert len(curve.samples) == 8
    assert np.all(np.diff(curve.column('ratio')) < 0)
    assert np.all(curve.column('det_p') < 0)
    assert np.all(np.diff(curve.column('a')) > 0)
    assert curve.to_dict()['verdict'] == 'Stable'


@pytest.mark.slow
@pytest.mark.parametrize('L, spacing', [
    (0.5 * np.pi, 'uniform'), (0.75 * np.pi, 'uniform'), (np.pi, 'uniform'), (2 * np.pi, 'log'),
])
def test_ratio_decreases_along_every_family(L, spacing):
    c = 2.0
    curve = stability_scan(L, c, 40, spacing=spacing)
    assert curve.verdict == 'Stable'
    assert curve.skipped == 0
    assert len(curve.samples) == 40
    assert np.all(curve.column('det_p') < 0)
    for sample in curve.samples[::10]:
        P = matrix_P(WaveParams(sample['a'], sample['b'], c), L)
        assert P.details['relative_gap'] < 1e-5


@pytest.mark.slow
def test_fold_near_the_peaked_end():
    L, c = np.pi, 2.0
    a_star = fold_on_curve(L, c)
    assert 4e-3 < a_star < 1e-2
    below = WaveParams(0.5 * a_star, fixed_period_b(0.5 * a_star, L, c), c)
    above = WaveParams(2.0 * a_star, fixed_period_b(2.0 * a_star, L, c), c)
    assert period_derivatives(below)['d_a'] > 0
    assert period_derivatives(above)['d_a'] < 0


@pytest.mark.slow
def test_matrix_S_singular_at_the_fold():
    L, c = np.pi, 2.0
    a_star = fold_on_curve(L, c)
    p = WaveParams(a_star, fixed_period_b(a_star, L, c), c)
    with pytest.raises(SingularFamily):
        matrix_S(p, L)


@pytest.mark.slow
def test_short_family_misses_the_fold():
    with pytest.raises(NoSolution):
        fold_on_curve(0.5 * np.pi, 2.0)


def test_stability_scan_counts_skipped_samples(monkeypatch):
    real = functionals.family_derivatives
    calls = []

    def flaky(alpha, L, h):
        calls.append(alpha)
        if len(calls) == 2:
            raise DerivativeFailure('stencil left the region')
        return real(alpha, L, h)

    monkeypatch.setattr(functionals, 'family_derivatives', flaky)
    curve = stability_scan(0.5 * np.pi, 2.0, 4)
    assert curve.skipped == 1
    assert len(curve.samples) == 3
    assert curve.to_dict()['skipped'] == 1
