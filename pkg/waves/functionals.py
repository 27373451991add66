"""
Conserved Functionals and Stability Criterion

Mass M = int phi dx, energy E = 1/2 int (phi^2 + phi'^2) dx and the higher
functional F = 1/2 int (phi^3 + phi phi'^2) dx of a wave, their derivatives
along the fixed-period families, the two 2-by-2 projection matrices P and S,
and the criterion d/da (E_L / M_L^2) < 0.

Along a family of fixed period L the speed dependence is removed by the
scaling phi(x) = c phi_hat(x), a = c^3 alpha, b = c^2 beta, which leaves x
(and hence L) unchanged: M_L = c M_hat(alpha), E_L = c^2 E_hat(alpha). Only
one-parameter alpha-derivatives are ever differenced.
"""

from dataclasses import dataclass, field

import numpy as np

from utils.logging_config import get_logger
from utils.tools import adaptive_gauss_legendre, richardson_derivative
from waves.elliptic import jacobi_sncndn
from waves.errors import DerivativeFailure, DomainError, NoSolution, SingularFamily
from waves.profile import (DERIVATIVE_STEP, WaveProfile, elliptic_state,
                           limit_kind, family_endpoint, fixed_period_b,
                           fixed_period_curve, period, period_derivatives,
                           period_is_singular_in_a)
from waves.wave_family import (WaveParams, constant_period, cubic_roots,
                               peaked_period)

logger = get_logger(__name__)

VERDICT_MARGIN = 3.0
FOLD_SCAN_FLOOR = 1e-5


@dataclass(frozen=True)
class ConservedTriple:
    """Mass, energy and the higher functional F of one wave."""
    mass: float
    energy: float
    higher: float

    def to_dict(self) -> dict:
        return {'mass': self.mass, 'energy': self.energy, 'higher': self.higher}


@dataclass
class ProjectionMatrix2:
    """2-by-2 projection matrix ('P' or 'S') with its determinant and the closed-form check."""
    entries: np.ndarray
    det: float
    which: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'which': self.which, 'entries': self.entries.tolist(), 'det': self.det,
                **self.details}


@dataclass
class StabilityCurve:
    """
    Samples of E_L/M_L^2 along b = B_L(a), sorted by a.

    Each sample is a dict with keys a, b, mass, energy, ratio, dratio_da,
    dratio_err and det_p. ``skipped`` counts family points whose derivative
    failed and that are missing from ``samples``.
    """
    L: float
    c: float
    samples: list
    verdict: str
    skipped: int = 0

    def column(self, key: str) -> np.ndarray:
        return np.array([s[key] for s in self.samples])

    def to_dict(self) -> dict:
        return {'L': self.L, 'c': self.c, 'verdict': self.verdict,
                'skipped': self.skipped, 'samples': self.samples}


def _z_integral(p: WaveParams, density) -> float:
    """
    int over one period in z of density(psi, c - psi) * sqrt(c - psi); the
    integrand is even about the half period so only [0, K] is integrated.
    """
    state = elliptic_state(p)
    ep = state.eparams

    def integrand(u):
        sn, _, _ = jacobi_sncndn(u, ep.k, ep.kprime)
        gap = state.delta + state.spread * sn * sn
        return density(p.c - gap, gap) * np.sqrt(gap)

    return 2.0 * adaptive_gauss_legendre(integrand, 0.0, state.quarter) / ep.gamma


def mass_energy(p: WaveParams) -> tuple:
    """
    (M, E) from quadrature in the elliptic variable, without sampling a profile.

    Uses phi'^2 = phi^2 + 2b - 2a/(c - phi), so the energy density per unit z
    is (b + psi^2 - a/(c - psi)) sqrt(c - psi). The constant-wave and
    peaked limits are returned in closed form.
    """
    kind = limit_kind(p)
    if kind == 'constant':
        phi2 = cubic_roots(p.a, p.c).phi2
        L = constant_period(p.a, p.c)
        return L * phi2, 0.5 * L * phi2 ** 2
    if kind == 'peaked':
        t = np.tanh(0.5 * peaked_period(p.b, p.c))
        return 2.0 * p.c * t, p.c ** 2 * t
    mass = _z_integral(p, lambda psi, gap: psi)
    energy = _z_integral(p, lambda psi, gap: p.b + psi * psi - p.a / gap)
    return float(mass), float(energy)


def higher_functional(p: WaveParams) -> float:
    """F = int (psi^3 + b psi - a psi/(c - psi)) sqrt(c - psi) dz."""
    kind = limit_kind(p)
    if kind == 'constant':
        phi2 = cubic_roots(p.a, p.c).phi2
        return 0.5 * constant_period(p.a, p.c) * phi2 ** 3
    if kind == 'peaked':
        half = 0.5 * peaked_period(p.b, p.c)
        sh = np.sinh(half)
        return float(p.c ** 3 / np.cosh(half) ** 3 * (sh + 2.0 / 3.0 * sh ** 3))
    return float(_z_integral(p, lambda psi, gap: psi ** 3 + p.b * psi - p.a * psi / gap))


def dphi_squared_integral(p: WaveParams) -> float:
    """int phi'^2 dx over one period, as int psi_z^2 / sqrt(c - psi) dz."""
    state = elliptic_state(p)
    ep = state.eparams

    def integrand(u):
        sn, cn, dn = jacobi_sncndn(u, ep.k, ep.kprime)
        gap = state.delta + state.spread * sn * sn
        slope = 2.0 * state.spread * ep.gamma * sn * cn * dn
        return slope * slope / np.sqrt(gap)

    return float(2.0 * adaptive_gauss_legendre(integrand, 0.0, state.quarter) / ep.gamma)


def conserved_on_grid(profile: WaveProfile) -> ConservedTriple:
    """M, E, F by the periodic trapezoidal rule on the profile's x-grid."""
    h = profile.period_L / profile.n_points
    phi, dphi = profile.phi, profile.dphi
    return ConservedTriple(
        mass=float(h * phi.sum()),
        energy=float(0.5 * h * (phi ** 2 + dphi ** 2).sum()),
        higher=float(0.5 * h * (phi ** 3 + phi * dphi ** 2).sum()),
    )


def conserved(profile: WaveProfile) -> ConservedTriple:
    """
    Conserved triple of a sampled wave.

    M and E come from the elliptic quadrature; F is integrated on the
    x-grid of the profile (closed form in the peaked limit).
    """
    p = profile.params
    mass, energy = mass_energy(p)
    if profile.limit == 'peaked':
        higher = higher_functional(p)
    else:
        higher = conserved_on_grid(profile).higher
    return ConservedTriple(mass=float(mass), energy=float(energy), higher=float(higher))


def euler_lagrange_residual(profile: WaveProfile) -> float:
    """
    Max of |(3/2) phi^2 - phi phi'' - phi'^2/2 - c (phi - phi'') + b| over the
    grid; the peak of a peaked wave is skipped.
    """
    p = profile.params
    phi, dphi, ddphi = profile.phi, profile.dphi, profile.ddphi
    r = 1.5 * phi ** 2 - phi * ddphi - 0.5 * dphi ** 2 - p.c * (phi - ddphi) + p.b
    if profile.limit == 'peaked':
        r = r[1:]
    return float(np.max(np.abs(r)))


def orbital_sign_checks(profile: WaveProfile) -> tuple:
    """
    Signs behind the orbital stability arguments.

    Returns:
        tuple: (kmm, lpp) with kmm = a (c M - 6E) and lpp = 2bM - 2cE.
    """
    p = profile.params
    mass, energy = mass_energy(p)
    kmm = p.a * (p.c * mass - 6.0 * energy)
    lpp = 2.0 * p.b * mass - 2.0 * p.c * energy
    return float(kmm), float(lpp)


def kmm_identity_gap(profile: WaveProfile) -> float:
    """
    Relative gap between c M - 6E and 2bL - cM - 2 int phi'^2, which must agree.
    """
    p = profile.params
    mass, energy = mass_energy(p)
    direct = p.c * mass - 6.0 * energy
    if profile.limit == 'constant':
        dphi_sq = 0.0
    else:
        dphi_sq = dphi_squared_integral(p)
    other = 2.0 * p.b * profile.period_L - p.c * mass - 2.0 * dphi_sq
    return float(abs(direct - other) / max(abs(direct), 1e-300))


# -- fixed-period families ------------------------------------------------------------


def family_point(alpha: float, L: float) -> tuple:
    """
    Point of the speed-one family of period L at alpha.

    Returns:
        tuple: (beta, M_hat, E_hat)
    """
    beta = fixed_period_b(alpha, L, 1.0)
    mass, energy = mass_energy(WaveParams(alpha, beta, 1.0))
    return beta, mass, energy


def _family_vector(alpha: float, L: float) -> np.ndarray:
    beta, mass, energy = family_point(alpha, L)
    return np.array([beta, mass, energy, energy / mass ** 2])


def family_derivatives(alpha: float, L: float, h: float = DERIVATIVE_STEP) -> dict:
    """
    alpha-derivatives of beta, M_hat, E_hat and E_hat/M_hat^2 along the
    speed-one family of period L, with Richardson error estimates.
    """
    alpha_L = family_endpoint(L, 1.0)
    if not (0.0 < alpha < alpha_L):
        raise DomainError(f"alpha={alpha!r} is outside (0, alpha_L={alpha_L:.17g})")
    beta, mass, energy = family_point(alpha, L)
    slope, err = richardson_derivative(lambda x: _family_vector(x, L), alpha, h, 0.0, alpha_L)
    return {
        'alpha': alpha, 'beta': beta, 'mass': mass, 'energy': energy,
        'ratio': energy / mass ** 2,
        'd_beta': float(slope[0]), 'd_mass': float(slope[1]),
        'd_energy': float(slope[2]), 'd_ratio': float(slope[3]),
        'err_mass': float(err[1]), 'err_energy': float(err[2]), 'err_ratio': float(err[3]),
    }


def _normalized_alpha(p: WaveParams, L: float) -> float:
    if abs(period(p) - L) > 1e-7 * L:
        raise DomainError(f"{p} is not on the family of period {L!r}")
    return p.a / p.c ** 3


def matrix_P(p: WaveParams, L: float, h: float = DERIVATIVE_STEP) -> ProjectionMatrix2:
    """
    Projection matrix P for the operator K on the fixed-period family.

    With M_L(a, c) = c M_hat(alpha), E_L(a, c) = c^2 E_hat(alpha):

        P = [[-dcM/(2a), -daM - c dcM/(2a)],
             [-dcE/(2a), -daE - c dcE/(2a)]],

    and det P must equal M_hat^3/(2 alpha c^4) d/dalpha (E_hat/M_hat^2),
    whose ratio derivative is differenced independently.

    Raises:
        DerivativeFailure: If the stencil cannot be placed inside (0, a_L).
    """
    alpha = _normalized_alpha(p, L)
    a, c = p.a, p.c
    d = family_derivatives(alpha, L, h)
    m, e, dm, de = d['mass'], d['energy'], d['d_mass'], d['d_energy']

    da_mass, da_energy = dm / c ** 2, de / c
    dc_mass = m - 3.0 * alpha * dm
    dc_energy = 2.0 * c * e - 3.0 * alpha * c * de
    entries = np.array([
        [-dc_mass / (2 * a), -da_mass - c * dc_mass / (2 * a)],
        [-dc_energy / (2 * a), -da_energy - c * dc_energy / (2 * a)],
    ])
    det = float(np.linalg.det(entries))
    closed = m ** 3 / (2.0 * alpha * c ** 4) * d['d_ratio']
    details = {
        'det_closed_form': float(closed),
        'relative_gap': float(abs(det - closed) / max(abs(closed), 1e-300)),
        'symmetry_gap': float(abs(entries[0, 1] - entries[1, 0])),
        'd_ratio': d['d_ratio'], 'd_ratio_err': d['err_ratio'],
    }
    return ProjectionMatrix2(entries=entries, det=det, which='P', details=details)


def matrix_S(p: WaveParams, L: float, h: float = DERIVATIVE_STEP) -> ProjectionMatrix2:
    """
    Projection matrix S for the operator L on the fixed-period family,
    parameterized by beta along the family:

        S = [[dbM, -dbE], [dcM, -dcE]],  det S = M_hat E_hat' - 2 E_hat M_hat'.

    Raises:
        SingularFamily: Where d_a L vanishes and the family is not a graph over b.
    """
    alpha = _normalized_alpha(p, L)
    unit = WaveParams(alpha, p.b / p.c ** 2, 1.0)
    if period_is_singular_in_a(unit):
        raise SingularFamily(f"d_a L vanishes at {p}; S is unbounded there")
    c = p.c
    d = family_derivatives(alpha, L, h)
    if d['d_beta'] == 0.0:
        raise SingularFamily(f"B_L'(a) vanishes at {p}")
    beta, m, e = d['beta'], d['mass'], d['energy']
    dm_beta = d['d_mass'] / d['d_beta']
    de_beta = d['d_energy'] / d['d_beta']

    db_mass, db_energy = dm_beta / c, de_beta
    dc_mass = m - 2.0 * beta * dm_beta
    dc_energy = 2.0 * c * e - 2.0 * beta * c * de_beta
    entries = np.array([[db_mass, -db_energy], [dc_mass, -dc_energy]])
    det = float(np.linalg.det(entries))
    closed = m ** 3 * d['d_ratio'] / d['d_beta']
    details = {
        'det_closed_form': float(closed),
        'relative_gap': float(abs(det - closed) / max(abs(closed), 1e-300)),
        'd_mass_d_beta': float(dm_beta),
        'd_beta_d_alpha': d['d_beta'],
    }
    return ProjectionMatrix2(entries=entries, det=det, which='S', details=details)


def upsilon_form(P: ProjectionMatrix2, r: float, s: float) -> float:
    """Quadratic form [r s] P [r s]^T."""
    v = np.array([r, s], dtype=float)
    return float(v @ P.entries @ v)


def negative_direction(P: ProjectionMatrix2) -> tuple:
    """
    Coefficients (r, s) on which the quadratic form of P is negative.

    Raises:
        NoSolution: If the symmetric part of P is non-negative.
    """
    sym = 0.5 * (P.entries + P.entries.T)
    values, vectors = np.linalg.eigh(sym)
    if values[0] >= 0:
        raise NoSolution(f"matrix {P.which} has no negative direction")
    r, s = vectors[:, 0]
    return float(r), float(s)


def stability_scan(L: float, c: float, n: int, spacing: str = 'uniform',
                   h: float = DERIVATIVE_STEP) -> StabilityCurve:
    """
    Sample E_L/M_L^2 along the fixed-period family and decide stability.

    The verdict is 'Stable' when d/da (E_L/M_L^2) is negative at every sample
    by more than VERDICT_MARGIN times its finite-difference error estimate,
    'Unstable' when it is positive somewhere beyond that margin and
    'Inconclusive' otherwise.

    Args:
        L (float): Period of the family.
        c (float): Wave speed.
        n (int): Number of samples in (0, a_L).
        spacing (str): 'uniform' or 'log' grid in a.

    Returns:
        StabilityCurve: Samples with M_L, E_L, the ratio, its slope and det P.
    """
    curve = fixed_period_curve(L, c, n, spacing)
    samples, skipped = [], 0
    for p in curve:
        alpha = p.a / c ** 3
        try:
            d = family_derivatives(alpha, L, h)
        except DerivativeFailure as exc:
            logger.warning('skipping a=%.6g: %s', p.a, exc)
            skipped += 1
            continue
        mass, energy = c * d['mass'], c ** 2 * d['energy']
        dm, de = d['d_mass'], d['d_energy']
        det_p = (d['mass'] * de - 2.0 * d['energy'] * dm) / (2.0 * p.a * c)
        samples.append({
            'a': p.a, 'b': p.b, 'mass': mass, 'energy': energy,
            'ratio': d['ratio'],
            'dratio_da': d['d_ratio'] / c ** 3,
            'dratio_err': d['err_ratio'] / c ** 3,
            'det_p': float(det_p),
        })

    slopes = np.array([s['dratio_da'] for s in samples])
    errors = np.array([s['dratio_err'] for s in samples])
    if samples and np.all(slopes < -VERDICT_MARGIN * errors):
        verdict = 'Stable'
    elif np.any(slopes > VERDICT_MARGIN * errors):
        verdict = 'Unstable'
    else:
        verdict = 'Inconclusive'
    logger.info('stability scan L=%.6g c=%.6g: %s over %d samples (%d skipped)',
                L, c, verdict, len(samples), skipped)
    return StabilityCurve(L=L, c=c, samples=samples, verdict=verdict, skipped=skipped)


def fold_on_curve(L: float, c: float, n_scan: int = 40) -> float:
    """
    The a on the family of period L where d_a L = 0, if the family crosses
    that locus.

    The scan is geometric in a, from FOLD_SCAN_FLOOR * a_L up to a_L, so
    crossings close to the peaked end are found.

    Raises:
        NoSolution: If d_a L keeps one sign along the family.
    """
    a_L = family_endpoint(L, c)
    grid = a_L * np.geomspace(FOLD_SCAN_FLOOR, 1.0, n_scan + 1)[:-1]
    curve = [WaveParams(float(a), fixed_period_b(a, L, c), c) for a in grid]
    slopes = [period_derivatives(p)['d_a'] for p in curve]
    for left, right, s_left, s_right in zip(curve[:-1], curve[1:], slopes[:-1], slopes[1:]):
        if np.sign(s_left) != np.sign(s_right):
            lo, hi = left.a, right.a
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                q = WaveParams(mid, fixed_period_b(mid, L, c), c)
                if np.sign(period_derivatives(q)['d_a']) == np.sign(s_left):
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-10 * c ** 3:
                    break
            return 0.5 * (lo + hi)
    raise NoSolution(f"family of period {L!r} does not cross the fold locus")
