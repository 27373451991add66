"""
Linearized Operators and Their Spectra

Fourier collocation of the operators linearized at a wave on the uniform
grid x_j = j L / N:

    L_op          -d/dx (c - phi) d/dx + (c - 3 phi + phi'')
    K_op          (c - phi)^3 - 2a (1 - d^2/dx^2)^{-1}
    M_schrodinger -d^2/dx^2 + 1 - 2a/(c - phi)^3
    JL_op         J L_op with J = -(1 - d^2/dx^2)^{-1} d/dx
    JphiK_op      (c - phi)^{-1} d/dx (c - phi)^{-1} K_op

plus the Floquet constant theta of the null equations, obtained by
shooting over one period.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.integrate import solve_ivp

from utils.logging_config import get_logger
from waves.errors import DomainError, IntegrationFailure, ResolutionError
from waves.functionals import mass_energy
from waves.profile import (WaveProfile, a_window, fixed_period_b, period,
                           period_derivatives, sample_profile)
from waves.wave_family import WaveParams, require_interior, turning_points

logger = get_logger(__name__)

KINDS = ('L_op', 'K_op', 'M_schrodinger', 'JL_op', 'JphiK_op')
SELF_ADJOINT = ('L_op', 'K_op', 'M_schrodinger')
DEFAULT_ZERO_TOL = 1e-7
ALIASING_TOL = 1e-10
BAND_OCCUPANCY = 0.9
STABILITY_TOL = 1e-6
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14


@dataclass
class DiscreteOperator:
    """Dense collocation matrix of one operator kind on the profile grid."""
    matrix: np.ndarray
    grid: np.ndarray
    kind: str
    profile: WaveProfile

    @property
    def N(self) -> int:
        return self.matrix.shape[0]


@dataclass
class SpectralReport:
    """
    Eigenvalues of a discrete operator with their classification.

    For self-adjoint kinds the counts use the threshold zero_tol * scale;
    for the flow operators max_real_part is taken over eigenvalues outside
    the zero cluster.
    """
    kind: str
    eigenvalues: np.ndarray
    n_negative: int = 0
    n_zero: int = 0
    n_positive: int = 0
    kernel_residual: float = float('nan')
    continuous_band: tuple = None
    band_fraction: float = None
    max_real_part: float = None
    spectral_radius: float = 0.0
    scale: float = 0.0
    details: dict = field(default_factory=dict)

    def summary(self) -> dict:
        """JSON-ready summary without the eigenvalue list."""
        out = {
            'kind': self.kind,
            'n': int(len(self.eigenvalues)),
            'n_negative': self.n_negative,
            'n_zero': self.n_zero,
            'n_positive': self.n_positive,
            'kernel_residual': self.kernel_residual,
            'spectral_radius': self.spectral_radius,
            'scale': self.scale,
        }
        if self.continuous_band is not None:
            out['continuous_band'] = list(self.continuous_band)
            out['band_fraction'] = self.band_fraction
        if self.max_real_part is not None:
            out['max_real_part'] = self.max_real_part
        out.update(self.details)
        return out


# -- Fourier machinery ----------------------------------------------------------------


def wavenumbers(N: int, L: float) -> np.ndarray:
    """xi_j = 2 pi j / L in FFT order."""
    return 2.0 * np.pi * np.fft.fftfreq(N, d=L / N)


def _fourier_matrix(symbol: np.ndarray) -> np.ndarray:
    """Real matrix of the circulant operator with the given (Hermitian) symbol."""
    N = symbol.size
    return np.real(np.fft.ifft(symbol[:, None] * np.fft.fft(np.eye(N), axis=0), axis=0))


def differentiation_matrix(N: int, L: float) -> np.ndarray:
    """Spectral d/dx with the Nyquist mode removed, so the matrix is skew-symmetric."""
    xi = wavenumbers(N, L)
    xi[N // 2] = 0.0
    return _fourier_matrix(1j * xi)


def smoothing_matrix(N: int, L: float) -> np.ndarray:
    """(1 - d^2/dx^2)^{-1} exactly in Fourier space."""
    xi = wavenumbers(N, L)
    return _fourier_matrix(1.0 / (1.0 + xi * xi))


def spectral_derivative(values: np.ndarray, L: float) -> np.ndarray:
    """d/dx of periodic samples via FFT."""
    N = values.size
    xi = wavenumbers(N, L)
    xi[N // 2] = 0.0
    return np.real(np.fft.ifft(1j * xi * np.fft.fft(values)))


def check_resolution(profile: WaveProfile, tol: float = ALIASING_TOL):
    """
    Raise ResolutionError when the top sixteenth of the Fourier spectrum of phi
    carries more than tol of the mean.
    """
    N = profile.n_points
    coeffs = np.abs(np.fft.rfft(profile.phi)) / N
    tail = coeffs[(7 * N) // 16:]
    worst = float(tail.max())
    if worst > tol * coeffs[0]:
        raise ResolutionError(
            f"profile not resolved at N={N}: trailing Fourier coefficient "
            f"{worst / coeffs[0]:.2e} of the mean (tolerance {tol:g})")
    return worst / coeffs[0]


def _profile_at(profile: WaveProfile, N: int) -> WaveProfile:
    if profile.limit == 'peaked':
        raise DomainError("linearized operators are not defined at the peaked limit")
    if N < 64 or N % 2:
        raise DomainError(f"N must be even and >= 64, got {N}")
    if profile.n_points == N:
        return profile
    return sample_profile(profile.params, N)


def _mu(profile: WaveProfile) -> np.ndarray:
    """mu = phi - phi'' = a/(c - phi)^2."""
    p = profile.params
    return p.a / (p.c - profile.phi) ** 2


# -- operators -------------------------------------------------------------------------


def _l_operator(profile: WaveProfile, D: np.ndarray) -> np.ndarray:
    p = profile.params
    N, L = profile.n_points, profile.period_L
    gap = p.c - profile.phi
    matrix = -D @ (gap[:, None] * D) + np.diag(p.c - 3.0 * profile.phi + profile.ddphi)
    # D drops the Nyquist mode; restore its second-derivative weight
    xi_nyquist = np.pi * N / L
    alternating = (-1.0) ** np.arange(N)
    matrix += gap.mean() * xi_nyquist ** 2 * np.outer(alternating, alternating) / N
    return matrix


def _k_operator(profile: WaveProfile, G: np.ndarray) -> np.ndarray:
    p = profile.params
    return np.diag((p.c - profile.phi) ** 3) - 2.0 * p.a * G


def build_operator(profile: WaveProfile, kind: str, N: int = None,
                   aliasing_tol: float = ALIASING_TOL) -> DiscreteOperator:
    """
    Assemble the collocation matrix of one operator kind.

    Args:
        profile (WaveProfile): Interior or constant wave.
        kind (str): One of KINDS.
        N (int): Grid size; the profile is resampled when it differs.
        aliasing_tol (float): Resolution threshold on trailing Fourier modes.

    Returns:
        DiscreteOperator: The matrix with its grid.

    Raises:
        DomainError: Unknown kind, bad N or a peaked profile.
        ResolutionError: If the grid does not resolve the profile.
    """
    if kind not in KINDS:
        raise DomainError(f"unknown operator kind {kind!r}; expected one of {KINDS}")
    profile = _profile_at(profile, N or profile.n_points)
    check_resolution(profile, aliasing_tol)
    N, L = profile.n_points, profile.period_L
    p = profile.params
    D = differentiation_matrix(N, L)
    G = smoothing_matrix(N, L)

    if kind == 'L_op':
        matrix = _l_operator(profile, D)
    elif kind == 'K_op':
        matrix = _k_operator(profile, G)
    elif kind == 'M_schrodinger':
        xi = wavenumbers(N, L)
        matrix = _fourier_matrix(xi * xi) + np.diag(1.0 - 2.0 * p.a / (p.c - profile.phi) ** 3)
    elif kind == 'JL_op':
        matrix = -G @ D @ _l_operator(profile, D)
    else:
        weight = 1.0 / (p.c - profile.phi)
        matrix = (weight[:, None] * D * weight[None, :]) @ _k_operator(profile, G)
    logger.debug('built %s at N=%d', kind, N)
    return DiscreteOperator(matrix=matrix, grid=profile.x_grid, kind=kind, profile=profile)


def _operator_scale(op: DiscreteOperator, eigenvalues: np.ndarray) -> float:
    """
    Size against which eigenvalues count as zero. The unbounded kinds use the
    symbol at the fundamental wavenumber so the threshold does not grow with N.
    """
    profile = op.profile
    p = profile.params
    xi1 = 2.0 * np.pi / profile.period_L
    if op.kind == 'L_op':
        return float(np.max(p.c - profile.phi) * xi1 ** 2
                     + np.max(np.abs(p.c - 3.0 * profile.phi + profile.ddphi)))
    if op.kind == 'M_schrodinger':
        return float(xi1 ** 2 + np.max(np.abs(1.0 - 2.0 * p.a / (p.c - profile.phi) ** 3)))
    return float(np.max(np.abs(eigenvalues)))


def eigen_report(op: DiscreteOperator, zero_tol: float = DEFAULT_ZERO_TOL) -> SpectralReport:
    """
    Eigenvalues and their classification.

    Self-adjoint kinds are symmetrized and solved with a symmetric solver;
    K_op additionally reports the band [(c - phi_plus)^3, (c - phi_minus)^3]
    and the share of its positive eigenvalues inside the band widened by
    1e-3 of its width. Flow kinds are solved with a general dense solver;
    eigenvalues inside the zero cluster, of radius
    max(zero_tol * radius, 10 (eps ||A||)^(1/4)), are excluded from
    max_real_part.
    """
    A = op.matrix
    if op.kind in SELF_ADJOINT:
        asymmetry = float(np.max(np.abs(A - A.T)))
        values = linalg.eigvalsh(0.5 * (A + A.T))
        scale = _operator_scale(op, values)
        threshold = zero_tol * scale
        report = SpectralReport(
            kind=op.kind, eigenvalues=values,
            n_negative=int(np.sum(values < -threshold)),
            n_zero=int(np.sum(np.abs(values) <= threshold)),
            n_positive=int(np.sum(values > threshold)),
            spectral_radius=float(np.max(np.abs(values))), scale=scale,
            details={'asymmetry': asymmetry},
        )
        if op.kind == 'K_op':
            profile = op.profile
            p = profile.params
            lo = (p.c - profile.turning.phi_plus) ** 3
            hi = (p.c - profile.turning.phi_minus) ** 3
            pad = 1e-3 * (hi - lo)
            positive = values[values > threshold]
            inside = (positive >= lo - pad) & (positive <= hi + pad)
            report.continuous_band = (float(lo), float(hi))
            report.band_fraction = float(inside.mean()) if positive.size else 0.0
            report.details['band_count'] = int(inside.sum())
        return report

    values = linalg.eigvals(A)
    radius = float(np.max(np.abs(values)))
    norm = float(np.linalg.norm(A, 1))
    cluster = max(zero_tol * radius, 10.0 * (np.finfo(float).eps * norm) ** 0.25)
    outside = values[np.abs(values) > cluster]
    max_real = float(np.max(np.abs(outside.real))) if outside.size else 0.0
    return SpectralReport(
        kind=op.kind, eigenvalues=values,
        n_zero=int(np.sum(np.abs(values) <= cluster)),
        max_real_part=max_real, spectral_radius=radius, scale=radius,
        details={'zero_cluster_radius': cluster},
    )


def kernel_residuals(profile: WaveProfile, N: int = None) -> tuple:
    """
    Residuals of the kernel relations L phi' = 0 and K mu' = 0.

    mu' is the spectral derivative of mu = a/(c - phi)^2.

    Returns:
        tuple: (rL, rK) as relative 2-norms.
    """
    profile = _profile_at(profile, N or profile.n_points)
    L_op = build_operator(profile, 'L_op').matrix
    K_op = build_operator(profile, 'K_op').matrix
    if profile.limit == 'constant':
        # the limiting period makes the fundamental mode a kernel direction
        mode = np.sin(2.0 * np.pi * profile.x_grid / profile.period_L)
        return (float(np.linalg.norm(L_op @ mode) / np.linalg.norm(mode)),
                float(np.linalg.norm(K_op @ mode) / np.linalg.norm(mode)))
    r_l = np.linalg.norm(L_op @ profile.dphi) / np.linalg.norm(profile.dphi)
    dmu = spectral_derivative(_mu(profile), profile.period_L)
    r_k = np.linalg.norm(K_op @ dmu) / np.linalg.norm(dmu)
    return float(r_l), float(r_k)


def operator_identities(profile: WaveProfile, N: int = None) -> dict:
    """
    Residuals of the closed-form operator identities:
    K mu = a (c - 3 phi), L 1 = c - 3 phi + phi'', L phi = 2b + c (phi'' - phi)
    and <K mu, mu> = a (c M - 6E).
    """
    profile = _profile_at(profile, N or profile.n_points)
    p = profile.params
    phi = profile.phi
    L_op = build_operator(profile, 'L_op').matrix
    K_op = build_operator(profile, 'K_op').matrix
    mu = _mu(profile)

    def rel(x, y):
        return float(np.linalg.norm(x - y) / max(np.linalg.norm(y), 1e-300))

    k_mu = K_op @ mu
    quad = float(profile.period_L / profile.n_points * np.dot(k_mu, mu))
    mass, energy = mass_energy(p)
    closed = p.a * (p.c * mass - 6.0 * energy)
    return {
        'k_mu': rel(k_mu, p.a * (p.c - 3.0 * phi)),
        'l_one': rel(L_op @ np.ones_like(phi), p.c - 3.0 * phi + profile.ddphi),
        'l_phi': rel(L_op @ phi, 2.0 * p.b + p.c * (profile.ddphi - phi)),
        'k_mu_mu': quad,
        'k_mu_mu_closed_form': closed,
        'k_mu_mu_gap': float(abs(quad - closed) / abs(closed)),
    }


def family_relations(p: WaveParams, L: float, N: int = 256, h: float = 1e-4) -> dict:
    """
    Residuals of K d_a mu = c - phi and K d_c mu = -2a, with d_a and d_c taken
    by central differences along the family of fixed period L.
    """
    profile = sample_profile(p, N)
    K_op = build_operator(profile, 'K_op').matrix

    def mu_at(a, c):
        q = WaveParams(a, fixed_period_b(a, L, c), c)
        return _mu(sample_profile(q, N))

    step_a = h * p.c ** 3
    step_c = h * p.c
    d_a = (mu_at(p.a + step_a, p.c) - mu_at(p.a - step_a, p.c)) / (2 * step_a)
    d_c = (mu_at(p.a, p.c + step_c) - mu_at(p.a, p.c - step_c)) / (2 * step_c)
    target_a = p.c - profile.phi
    target_c = np.full(N, -2.0 * p.a)
    return {
        'k_da_mu': float(np.linalg.norm(K_op @ d_a - target_a) / np.linalg.norm(target_a)),
        'k_dc_mu': float(np.linalg.norm(K_op @ d_c - target_c) / np.linalg.norm(target_c)),
    }


def _pair_low_spectrum(first: np.ndarray, second: np.ndarray, cluster: float, m: int) -> float:
    def lowest(values):
        values = values[np.abs(values) > cluster]
        values = values[np.argsort(np.abs(values))][:m]
        return np.sort(values.imag)

    a, b = lowest(first), lowest(second)
    n = min(a.size, b.size)
    if n == 0:
        return float('nan')
    return float(np.max(np.abs(a[:n] - b[:n]) / np.maximum(np.abs(a[:n]), 1e-300)))


def spectral_stability(profile: WaveProfile, N: int = None,
                       zero_tol: float = DEFAULT_ZERO_TOL) -> SpectralReport:
    """
    Spectral stability through both flow operators.

    The wave is reported stable when max |Re lambda| of JL_op and of JphiK_op
    are both below 1e-6 of their spectral radii. The two operators have the
    same nonzero spectrum; the lowest N/16 nonzero eigenvalues of each are
    compared pairwise and the worst relative gap is reported.

    Returns:
        SpectralReport: The JL_op report; details carry the JphiK_op figures,
        the equivalence gap and the 'stable' verdict.
    """
    profile = _profile_at(profile, N or profile.n_points)
    jl = eigen_report(build_operator(profile, 'JL_op'), zero_tol)
    jk = eigen_report(build_operator(profile, 'JphiK_op'), zero_tol)
    cluster = max(jl.details['zero_cluster_radius'], jk.details['zero_cluster_radius'])
    gap = _pair_low_spectrum(jl.eigenvalues, jk.eigenvalues, cluster, profile.n_points // 16)
    stable = (jl.max_real_part < STABILITY_TOL * jl.spectral_radius
              and jk.max_real_part < STABILITY_TOL * jk.spectral_radius)
    jl.details.update({
        'jphik_max_real_part': jk.max_real_part,
        'jphik_spectral_radius': jk.spectral_radius,
        'equivalence_gap': gap,
        'stable': bool(stable),
    })
    return jl


# -- Floquet constant ------------------------------------------------------------------


def _shoot(p: WaveParams, rhs_v, L: float, dense: bool = False):
    c, a = p.c, p.a
    phi_plus = turning_points(p).phi_plus

    def rhs(x, y):
        phi, dphi, v, dv = y
        gap = c - phi
        ddphi = phi - a / gap ** 2
        return [dphi, ddphi, dv, rhs_v(phi, dphi, ddphi, v, dv)]

    sol = solve_ivp(rhs, (0.0, L), [phi_plus, 0.0, 1.0, 0.0], method='DOP853',
                    rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=dense)
    if not sol.success:
        raise IntegrationFailure(f"shooting failed at {p}: {sol.message}")
    return sol


def _null_equation(p: WaveParams, family: str, form: str):
    c, a = p.c, p.a
    if family == 'in_b':
        return lambda phi, dphi, ddphi, v, dv: (1.0 - 2.0 * a / (c - phi) ** 3) * v
    if family != 'in_a':
        raise DomainError(f"family must be 'in_a' or 'in_b', got {family!r}")
    if form == 'liouville':
        def liouville(phi, dphi, ddphi, w, dw):
            gap = c - phi
            q = (c - 3.0 * phi) / gap + ddphi / (2.0 * gap) - 0.25 * (dphi / gap) ** 2
            return q * w
        return liouville
    if form != 'direct':
        raise DomainError(f"form must be 'direct' or 'liouville', got {form!r}")
    return lambda phi, dphi, ddphi, v, dv: (dphi * dv + (ddphi - 3.0 * phi + c) * v) / (c - phi)


def floquet_theta(p: WaveParams, family: str = 'in_a', form: str = 'direct') -> float:
    """
    Floquet constant theta = v'(L) of the null equation started from
    v(0) = 1, v'(0) = 0 at the wave maximum.

    Args:
        p (WaveParams): Interior parameters.
        family (str): 'in_a' for L_op v = 0, 'in_b' for the Schrodinger
            equation -v'' + (1 - 2a/(c - phi)^3) v = 0.
        form (str): For 'in_a', 'direct' integrates
            (c - phi) v'' - phi' v' + (3 phi - c - phi'') v = 0 and 'liouville'
            integrates w'' = Q w with the Liouville potential Q; both give the
            same theta.

    Raises:
        IntegrationFailure: If the integrator fails.
    """
    require_interior(p)
    L = period(p)
    sol = _shoot(p, _null_equation(p, family, form), L)
    theta = float(sol.y[3, -1])
    logger.debug('theta(%s, %s) = %.6e at %s', family, form, theta, p)
    return theta


def theta_closed_form(p: WaveParams, family: str = 'in_a') -> float:
    """
    theta from the period slopes: -(c - phi_plus) phi''(0)^2 d_a L for 'in_a'
    and phi''(0)^2 d_b L for 'in_b'.
    """
    tp = turning_points(p)
    curvature = tp.phi_plus - p.a / tp.gap_plus ** 2
    slopes = period_derivatives(p)
    if family == 'in_a':
        return float(-tp.gap_plus * curvature ** 2 * slopes['d_a'])
    if family == 'in_b':
        return float(curvature ** 2 * slopes['d_b'])
    raise DomainError(f"family must be 'in_a' or 'in_b', got {family!r}")


def wronskian_check(p: WaveParams, n_probe: int = 200) -> float:
    """
    Max relative deviation of y1 y2' - y1' y2 from (c - phi(0))/(c - phi(x))
    along one period, y1 being the in_a shooting solution and
    y2 = phi'/phi''(0).
    """
    require_interior(p)
    L = period(p)
    sol = _shoot(p, _null_equation(p, 'in_a', 'direct'), L, dense=True)
    x = np.linspace(0.0, L, n_probe)
    phi, dphi, v, dv = sol.sol(x)
    ddphi = phi - p.a / (p.c - phi) ** 2
    curvature0 = ddphi[0]
    wronskian = v * ddphi / curvature0 - dv * dphi / curvature0
    expected = (p.c - phi[0]) / (p.c - phi)
    return float(np.max(np.abs(wronskian - expected) / expected))


def fold_by_theta(b: float, c: float, n_scan: int = 24) -> float:
    """
    Locate the a where theta_in_a changes sign on the slice of fixed b, by
    bisection on the shooting value.
    """
    a_lo, a_hi = a_window(b, c)
    grid = a_lo + (a_hi - a_lo) * np.linspace(0.02, 0.98, n_scan)
    thetas = [floquet_theta(WaveParams(a, b, c)) for a in grid]
    for left, right, t_left, t_right in zip(grid[:-1], grid[1:], thetas[:-1], thetas[1:]):
        if np.sign(t_left) != np.sign(t_right):
            lo, hi = left, right
            while hi - lo > 1e-9 * c ** 3:
                mid = 0.5 * (lo + hi)
                if np.sign(floquet_theta(WaveParams(mid, b, c))) == np.sign(t_left):
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    return float('nan')
