"""
Wave Profiles and the Period Function

The smooth wave is built from its explicit elliptic form. In the stretched
variable z, with dx/dz = sqrt(c - psi),

    psi(z) = c/3 + (4/3) gamma^2 (1 - 2k^2 + 3k^2 cn^2(gamma z; k)),

which is written here as c - psi = delta + spread * sn^2(gamma z) with
delta = c - phi_plus and spread = phi_plus - phi_minus. Both pieces are
positive and are carried separately, so nothing cancels near the peaked
limit where delta -> 0.
"""

from dataclasses import dataclass, field

import numpy as np

from utils.logging_config import get_logger
from utils.tools import adaptive_gauss_legendre, bracketed_root, richardson_derivative
from waves.elliptic import complete_K, jacobi_sncndn
from waves.errors import DomainError, NoSolution, QuadratureFailure
from waves.wave_family import (TurningPoints, WaveParams, a_minus, a_plus,
                               b_from_constant_period, constant_period,
                               critical_value_a, cubic_roots, peaked_b,
                               peaked_period, require_interior, shape_threshold,
                               turning_points)

logger = get_logger(__name__)

INVARIANT_TOL = 1e-8
DERIVATIVE_STEP = 1e-5


@dataclass(frozen=True)
class EllipticParams:
    """
    Elliptic parameterization (gamma, k, c) of a smooth wave.

    ``kprime`` is sqrt(1 - k^2), kept at full relative precision.
    """
    gamma: float
    k: float
    c: float
    kprime: float = None

    def __post_init__(self):
        if self.kprime is None:
            object.__setattr__(self, 'kprime', float(np.sqrt((1.0 - self.k) * (1.0 + self.k))))


@dataclass
class WaveProfile:
    """
    One period of a traveling wave sampled on the uniform grid x_j = j L / n.

    ``limit`` is 'interior' for smooth waves, 'constant' on the constant-wave
    boundary and 'peaked' on the segment a = 0.
    """
    period_L: float
    x_grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray
    turning: TurningPoints
    params: WaveParams
    eparams: EllipticParams = None
    limit: str = 'interior'
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return len(self.x_grid)


@dataclass(frozen=True)
class EllipticState:
    """Turning points and the pieces delta, spread, K(k) of the elliptic form."""
    turning: TurningPoints
    eparams: EllipticParams
    delta: float
    spread: float
    quarter: float


def params_from_turning(tp: TurningPoints, c: float) -> EllipticParams:
    """
    Invert the turning-point formulas:
    gamma^2 = (2 phi_plus + phi_minus - c)/4 and
    k^2 = (phi_plus - phi_minus)/(2 phi_plus + phi_minus - c).

    Raises:
        DomainError: If 2 phi_plus + phi_minus <= c or the ordering fails.
    """
    denom = 2.0 * tp.phi_plus + tp.phi_minus - c
    spread = tp.phi_plus - tp.phi_minus
    if denom <= 0 or spread < 0:
        raise DomainError(
            f"turning points ({tp.phi_minus!r}, {tp.phi_plus!r}) do not define a wave for c={c!r}")
    k_sq = spread / denom
    kprime_sq = (tp.phi_plus + 2.0 * tp.phi_minus - c) / denom
    if kprime_sq <= 0:
        raise DomainError("turning points sit on the solitary limit k = 1")
    return EllipticParams(gamma=float(np.sqrt(denom / 4.0)), k=float(np.sqrt(k_sq)), c=c,
                          kprime=float(np.sqrt(kprime_sq)))


def turning_from_elliptic(ep: EllipticParams) -> TurningPoints:
    """phi_plus = c/3 + (4/3) gamma^2 (1 + k^2), phi_minus = c/3 + (4/3) gamma^2 (1 - 2k^2)."""
    g2, k2 = ep.gamma ** 2, ep.k ** 2
    phi_plus = ep.c / 3.0 + 4.0 / 3.0 * g2 * (1.0 + k2)
    phi_minus = ep.c / 3.0 + 4.0 / 3.0 * g2 * (1.0 - 2.0 * k2)
    gap_plus = 2.0 / 3.0 * (ep.c - 2.0 * g2 * (1.0 + k2))
    return TurningPoints(phi_minus=phi_minus, phi_plus=phi_plus, gap_plus=gap_plus)


def ab_from_elliptic(ep: EllipticParams) -> WaveParams:
    """
    Integration constants of the wave with elliptic parameters ep.

    Example:
        >>> ab_from_elliptic(EllipticParams(gamma=0.5, k=0.0, c=2.0)).b
        0.5
    """
    if ep.gamma <= 0 or not (0.0 <= ep.k < 1.0):
        raise DomainError(f"invalid elliptic parameters {ep}")
    g2, k2, c = ep.gamma ** 2, ep.k ** 2, ep.c
    a = 4.0 / 27.0 * (c + 2.0 * g2 * (2.0 - k2)) * (c - 2.0 * g2 * (1.0 + k2)) \
        * (c - 2.0 * g2 * (1.0 - 2.0 * k2))
    b = c * c / 6.0 - 8.0 / 3.0 * g2 * g2 * (1.0 - k2 + k2 * k2)
    return WaveParams(a=float(a), b=float(b), c=c)


def elliptic_state(p: WaveParams) -> EllipticState:
    require_interior(p)
    tp = turning_points(p)
    ep = params_from_turning(tp, p.c)
    spread = tp.phi_plus - tp.phi_minus
    return EllipticState(turning=tp, eparams=ep, delta=tp.gap_plus, spread=spread,
                         quarter=complete_K(ep.k, ep.kprime))


def _gap(state: EllipticState, u):
    """c - psi at u = gamma z"""
    sn, _, _ = jacobi_sncndn(u, state.eparams.k, state.eparams.kprime)
    return state.delta + state.spread * sn * sn


def limit_kind(p: WaveParams) -> str:
    """'peaked' for a = 0, 'constant' for b exactly on b_-(a), else 'interior'."""
    if p.a == 0.0:
        return 'peaked'
    if p.a > 0.0 and p.a < critical_value_a(p.c):
        roots = cubic_roots(p.a, p.c)
        if p.b == roots.phi2 * (p.c - 1.5 * roots.phi2):
            return 'constant'
    return 'interior'


def period(p: WaveParams) -> float:
    """
    Period function L(a, b, c) from the elliptic form of the wave:

        L = (2/gamma) * integral_0^K sqrt(delta + spread sn^2(u)) du.

    The two closed limits are accepted: b = b_-(a) returns the constant-wave
    limit 2 pi/omega and a = 0 returns the peaked-wave period.

    Raises:
        NotInRegion: If p is not strictly inside the existence region.
    """
    kind = limit_kind(p)
    if kind == 'peaked':
        return peaked_period(p.b, p.c)
    if kind == 'constant':
        return constant_period(p.a, p.c)
    state = elliptic_state(p)
    half = adaptive_gauss_legendre(lambda u: np.sqrt(_gap(state, u)), 0.0, state.quarter)
    return float(2.0 * half / state.eparams.gamma)


def period_quadrature(p: WaveParams) -> float:
    """
    Period from the turning-point quadrature after phi = phi_minus + spread sin^2(t):

        L = 4 * integral_0^{pi/2} sqrt((c - phi)/(phi - phi_star)) dt,

    phi_star = c - phi_minus - phi_plus being the third root of
    (c - phi)(2b + phi^2) = 2a.
    """
    state = elliptic_state(p)
    ep = state.eparams
    low_gap = 4.0 * (ep.gamma * ep.kprime) ** 2

    def integrand(t):
        s, co = np.sin(t), np.cos(t)
        return np.sqrt((state.delta + state.spread * co * co)
                       / (low_gap + state.spread * s * s))

    return float(4.0 * adaptive_gauss_legendre(integrand, 0.0, 0.5 * np.pi))


def a_window(b: float, c: float) -> tuple:
    """Open interval of a in which (a, b) is interior."""
    lo = a_plus(b, c) if b > 0 else 0.0
    hi = a_minus(b, c)
    return lo, hi


def b_window(a: float, c: float) -> tuple:
    """(b_-(a), b_+(a))."""
    roots = cubic_roots(a, c)
    return roots.phi2 * (c - 1.5 * roots.phi2), roots.phi1 * (c - 1.5 * roots.phi1)


def period_derivatives(p: WaveParams, h: float = DERIVATIVE_STEP) -> dict:
    """
    Partial derivatives of the period in a and b by Richardson differences.

    The steps are h c^3 in a and h c^2 in b, i.e. h in normalized
    coordinates. Stencils stay strictly inside the region and switch to
    one-sided near a boundary.

    Returns:
        dict: d_a, d_b and their error estimates err_a, err_b.
    """
    require_interior(p)
    a, b, c = p.a, p.b, p.c
    a_lo, a_hi = a_window(b, c)
    b_lo, b_hi = b_window(a, c)
    d_a, err_a = richardson_derivative(lambda x: period(WaveParams(x, b, c)), a,
                                       h * c ** 3, a_lo, a_hi)
    d_b, err_b = richardson_derivative(lambda y: period(WaveParams(a, y, c)), b,
                                       h * c ** 2, b_lo, b_hi)
    return {'d_a': d_a, 'd_b': d_b, 'err_a': err_a, 'err_b': err_b}


def _invert_arclength(state: EllipticState, targets: np.ndarray) -> np.ndarray:
    """
    Solve x(u) = target for u in [0, K], x(u) = (1/gamma) int_0^u sqrt(c - psi).

    Composite 32-node Gauss-Legendre panels give the cumulative table; the
    panel count doubles until the table total matches the adaptive half
    period. Each target is then found by Newton's method safeguarded by its
    panel bracket.
    """
    gamma, quarter = state.eparams.gamma, state.quarter
    half_period = adaptive_gauss_legendre(lambda u: np.sqrt(_gap(state, u)), 0.0, quarter) / gamma
    nodes, weights = np.polynomial.legendre.leggauss(32)

    def partial(lo, hi):
        mid, width = 0.5 * (lo + hi), 0.5 * (hi - lo)
        u = mid[:, None] + width[:, None] * nodes[None, :]
        return width * (np.sqrt(_gap(state, u.ravel())).reshape(u.shape) @ weights) / gamma

    n_panels = 64
    while True:
        edges = np.linspace(0.0, quarter, n_panels + 1)
        cumulative = np.concatenate([[0.0], np.cumsum(partial(edges[:-1], edges[1:]))])
        if abs(cumulative[-1] - half_period) <= 1e-12 * half_period:
            break
        n_panels *= 2
        if n_panels > (1 << 15):
            raise QuadratureFailure("arclength table did not converge")

    cumulative *= half_period / cumulative[-1]
    idx = np.clip(np.searchsorted(cumulative, targets, side='right') - 1, 0, n_panels - 1)
    lo, hi = edges[idx].copy(), edges[idx + 1].copy()
    base = cumulative[idx]
    frac = (targets - base) / np.maximum(cumulative[idx + 1] - base, 1e-300)
    u = lo + frac * (hi - lo)

    for _ in range(60):
        residual = base + partial(edges[idx], u) - targets
        lo = np.where(residual < 0, u, lo)
        hi = np.where(residual > 0, u, hi)
        slope = np.sqrt(_gap(state, u)) / gamma
        step = residual / slope
        candidate = u - step
        outside = (candidate < lo) | (candidate > hi)
        candidate = np.where(outside, 0.5 * (lo + hi), candidate)
        moved = np.abs(candidate - u)
        u = candidate
        if np.all(moved <= 4 * np.finfo(float).eps * quarter):
            break
    return u


def _constant_profile(p: WaveParams, n_points: int) -> WaveProfile:
    roots = cubic_roots(p.a, p.c)
    L = constant_period(p.a, p.c)
    x = L * np.arange(n_points) / n_points
    phi = np.full(n_points, roots.phi2)
    tp = TurningPoints(phi_minus=roots.phi2, phi_plus=roots.phi2, gap_plus=roots.gap2)
    ep = params_from_turning(tp, p.c)
    return WaveProfile(period_L=L, x_grid=x, phi=phi, dphi=np.zeros(n_points),
                       ddphi=np.zeros(n_points), turning=tp, params=p, eparams=ep,
                       limit='constant')


def _peaked_profile(p: WaveParams, n_points: int) -> WaveProfile:
    c = p.c
    L = peaked_period(p.b, c)
    x = L * np.arange(n_points) / n_points
    dist = np.minimum(x, L - x)
    scale = c / np.cosh(0.5 * L)
    phi = scale * np.cosh(0.5 * L - dist)
    dphi = -np.sign(L / 2 - x) * scale * np.sinh(0.5 * L - dist)
    dphi[0] = 0.0
    tp = turning_points(p)
    return WaveProfile(period_L=L, x_grid=x, phi=phi, dphi=dphi, ddphi=phi.copy(),
                       turning=tp, params=p, limit='peaked',
                       diagnostics={'peaked_limit': True})


def invariant_residual(profile: WaveProfile) -> float:
    """Max of |(c - phi)(phi'^2 - phi^2 - 2b) + 2a| over the grid."""
    p = profile.params
    r = (p.c - profile.phi) * (profile.dphi ** 2 - profile.phi ** 2 - 2.0 * p.b) + 2.0 * p.a
    return float(np.max(np.abs(r)))


def sample_profile(p: WaveParams, n_points: int = 256) -> WaveProfile:
    """
    Sample one period of the wave on x_j = j L / n, j = 0..n-1.

    phi comes from the elliptic form at the z that maps to each x_j; phi'
    comes from the analytic derivative of psi divided by dx/dz and phi''
    from phi'' = phi - a/(c - phi)^2, so no numerical differentiation is
    involved. The maximum phi_plus sits at x = 0 and the minimum at L/2.

    Args:
        p (WaveParams): Interior parameters, or one of the two closed limits.
        n_points (int): Even grid size, at least 64.

    Returns:
        WaveProfile: The sampled profile with its period and turning points.

    Raises:
        DomainError: If n_points is odd or below 64.
        NotInRegion: If p is outside the existence region.
        QuadratureFailure: If the first-order invariant is violated.
    """
    if n_points < 64 or n_points % 2:
        raise DomainError(f"n_points must be even and >= 64, got {n_points}")
    kind = limit_kind(p)
    if kind == 'peaked':
        return _peaked_profile(p, n_points)
    if kind == 'constant':
        return _constant_profile(p, n_points)

    state = elliptic_state(p)
    ep = state.eparams
    L = period(p)
    x = L * np.arange(n_points) / n_points
    half = n_points // 2
    u = _invert_arclength(state, x[:half + 1])

    sn, cn, dn = jacobi_sncndn(u, ep.k, ep.kprime)
    gap = state.delta + state.spread * sn * sn
    phi_half = p.c - gap
    dphi_half = -2.0 * state.spread * ep.gamma * sn * cn * dn / np.sqrt(gap)
    ddphi_half = phi_half - p.a / gap ** 2

    # even extension about x = L/2
    phi = np.concatenate([phi_half, phi_half[1:half][::-1]])
    dphi = np.concatenate([dphi_half, -dphi_half[1:half][::-1]])
    ddphi = np.concatenate([ddphi_half, ddphi_half[1:half][::-1]])
    dphi[0] = 0.0
    dphi[half] = 0.0

    profile = WaveProfile(period_L=L, x_grid=x, phi=phi, dphi=dphi, ddphi=ddphi,
                          turning=state.turning, params=p, eparams=ep)
    residual = invariant_residual(profile)
    profile.diagnostics['invariant_residual'] = residual
    if residual > INVARIANT_TOL * max(1.0, abs(p.a)):
        raise QuadratureFailure(
            f"first-order invariant residual {residual:.3e} exceeds {INVARIANT_TOL:g}")
    logger.debug('profile n=%d L=%.17g residual=%.3e', n_points, L, residual)
    return profile


def solitary_psi(z, gamma: float, c: float):
    """k -> 1 limit of the elliptic form: c/3 + (4/3) gamma^2 (3 sech^2(gamma z) - 1)."""
    z = np.asarray(z, dtype=float)
    return c / 3.0 + 4.0 / 3.0 * gamma ** 2 * (3.0 / np.cosh(gamma * z) ** 2 - 1.0)


def scaling_exponent(p: WaveParams) -> float:
    """
    Exponent nu in L(c^3 alpha, c^2 beta, c) = c^nu L(alpha, beta, 1),
    measured numerically.

    Raises:
        DomainError: For c = 1, where the exponent is undefined.
    """
    if p.c == 1.0:
        raise DomainError("scaling exponent needs c != 1")
    unit = WaveParams(p.a / p.c ** 3, p.b / p.c ** 2, 1.0)
    return float(np.log(period(p) / period(unit)) / np.log(p.c))


def fold_point(b: float, c: float, n_scan: int = 40) -> float:
    """
    The a at which the period stops growing in a on the slice of fixed b.

    Only slices with -(1 - sqrt(2/3)) c^2 < b < 0 have such a point.

    Raises:
        DomainError: If b is outside that window.
        NoSolution: If no sign change of d_a L is found on the scan.
    """
    if not (shape_threshold(c) < b < 0.0):
        raise DomainError(f"b={b!r} has no interior period maximum for c={c!r}")
    a_hi = a_minus(b, c)
    grid = a_hi * np.linspace(0.02, 0.98, n_scan)

    def slope(a):
        return period_derivatives(WaveParams(a, b, c))['d_a']

    values = [slope(a) for a in grid]
    for left, right, f_left, f_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_left > 0 >= f_right:
            return bracketed_root(slope, left, right, xtol=1e-12 * c ** 3)
    raise NoSolution(f"d_a L does not change sign on the slice b={b!r}")


def fixed_period_b(a: float, L: float, c: float) -> float:
    """
    The b in (b_-(a), b_+(a)) with L(a, b, c) = L.

    Raises:
        NoSolution: If a is not below the endpoint a_L of the family.
    """
    if a <= 0:
        raise NoSolution(f"fixed-period family starts at a > 0, got a={a!r}")
    b_lo, b_hi = b_window(a, c)
    if constant_period(a, c) >= L:
        raise NoSolution(f"period {L!r} is below the constant-wave period at a={a!r}")

    def excess(b):
        return period(WaveParams(a, b, c)) - L

    gap = 1e-3 * (b_hi - b_lo)
    while excess(b_hi - gap) <= 0:
        gap *= 0.1
        if gap < 1e-15 * c * c:
            raise NoSolution(f"period {L!r} not reached below the solitary boundary at a={a!r}")
    return bracketed_root(excess, b_lo, b_hi - gap, xtol=1e-15 * c * c)


def family_endpoint(L: float, c: float) -> float:
    """a_L, where the fixed-period family meets the constant-wave boundary."""
    return a_minus(b_from_constant_period(L, c), c)


def fixed_period_curve(L: float, c: float, n_samples: int,
                       spacing: str = 'uniform') -> list:
    """
    Sample the fixed-period family b = B_L(a) for a in (0, a_L).

    Args:
        L (float): Period, L > 0.
        c (float): Wave speed.
        n_samples (int): Number of samples strictly inside (0, a_L).
        spacing (str): 'uniform' in a, or 'log' to refine towards a = 0.

    Returns:
        list: WaveParams sorted by a, each with period L to 1e-9 relative.
    """
    if L <= 0 or c <= 0:
        raise DomainError(f"need L > 0 and c > 0, got L={L!r}, c={c!r}")
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    a_L = family_endpoint(L, c)
    if spacing == 'log':
        fractions = np.geomspace(1e-4, 1.0, n_samples + 1)[:-1]
    elif spacing == 'uniform':
        fractions = np.arange(1, n_samples + 1) / (n_samples + 1)
    else:
        raise DomainError(f"unknown spacing {spacing!r}")

    curve = []
    for a in a_L * fractions:
        curve.append(WaveParams(a=float(a), b=fixed_period_b(a, L, c), c=c))
    logger.info('fixed-period curve L=%.6g c=%.6g: %d samples up to a_L=%.6g',
                L, c, len(curve), a_L)
    return curve


def family_limits(L: float, c: float) -> dict:
    """Endpoints of the fixed-period family: the peaked end (0, b) and the constant end (a_L, b)."""
    b_const = b_from_constant_period(L, c)
    return {'peaked': (0.0, peaked_b(L, c)), 'constant': (a_minus(b_const, c), b_const)}


def family_profile(a: float, L: float, c: float, n_points: int = 256) -> WaveProfile:
    """Profile of the L-periodic wave with integration constant a."""
    return sample_profile(WaveParams(a, fixed_period_b(a, L, c), c), n_points)


def period_is_singular_in_a(p: WaveParams, threshold: float = 1e-6) -> bool:
    """True when |d_a L| is below threshold relative to L/a_c."""
    slope = period_derivatives(p)['d_a']
    return abs(slope) < threshold * period(p) / critical_value_a(p.c)

