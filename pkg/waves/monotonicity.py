"""
Period Monotonicity in b

Around the center phi2, the substitution x = (phi - phi2)/phi2 turns the
wave equation into x' = y, y' = 1 + x - eta^2/(eta - x)^2 with Hamiltonian
y^2/2 + V(x), eta = (c - phi2)/phi2 in (0, 2). The period grows with the
energy level (hence with b) when W = V/(V')^2 is convex between the left
maximum x1 of V and its mirror level point x2, which reduces to the sign of
the cubic R below.
"""

from dataclasses import asdict, dataclass

import numpy as np

from utils.logging_config import get_logger
from utils.tools import bracketed_root
from waves.errors import DomainError
from waves.wave_family import WaveParams, require_interior

logger = get_logger(__name__)

ENDPOINT_EXCLUSION = 1e-6


@dataclass(frozen=True)
class ChiconeSetup:
    """Critical points x1 < 0 < x2 < eta < x3 of V and the separatrix level h_star = V(x1)."""
    eta: float
    x1: float
    x2: float
    x3: float
    h_star: float


def _check_eta(eta: float):
    if not (0.0 < eta < 2.0):
        raise DomainError(f"eta must lie in (0, 2), got {eta!r}")


def hamiltonian_potential(x, eta: float):
    """
    V(x) = -x^2/2 - x - eta + eta^2/(eta - x), evaluated in the factored
    form x^2 (2 - eta + x) / (2 (eta - x)).
    """
    x = np.asarray(x, dtype=float)
    return x * x * (2.0 - eta + x) / (2.0 * (eta - x))


def _critical_points(eta: float) -> tuple:
    root = np.sqrt(4.0 * eta + 1.0)
    return eta - 0.5 - 0.5 * root, eta - 0.5 + 0.5 * root


def potential_slope(x, eta: float):
    """V'(x) = -x (x - x1)(x - x3) / (eta - x)^2."""
    x1, x3 = _critical_points(eta)
    x = np.asarray(x, dtype=float)
    return -x * (x - x1) * (x - x3) / (eta - x) ** 2


def chicone_W(x, eta: float):
    """
    W(x) = V(x) / V'(x)^2 = (2 - eta + x)(eta - x)^3 / (2 (x - x1)^2 (x - x3)^2);
    the removable singularity at the center x = 0 is cancelled analytically.
    """
    x1, x3 = _critical_points(eta)
    x = np.asarray(x, dtype=float)
    return (2.0 - eta + x) * (eta - x) ** 3 / (2.0 * (x - x1) ** 2 * (x - x3) ** 2)


def R_cubic(x, eta: float):
    """R(x) = (1 - 2 eta) x^3 + eta (6 eta - 7) x^2 - 3 eta^2 (2 eta - 3) x + eta^2 (2 eta + 1)(eta - 2)."""
    x = np.asarray(x, dtype=float)
    return ((1.0 - 2.0 * eta) * x ** 3 + eta * (6.0 * eta - 7.0) * x ** 2
            - 3.0 * eta ** 2 * (2.0 * eta - 3.0) * x + eta ** 2 * (2.0 * eta + 1.0) * (eta - 2.0))


def R_at_x1(eta: float) -> float:
    """Closed form of R(x1): ((eta - 1) sqrt(4 eta + 1) - eta - 1)(4 eta + 1)/2."""
    root = np.sqrt(4.0 * eta + 1.0)
    return float(0.5 * ((eta - 1.0) * root - eta - 1.0) * (4.0 * eta + 1.0))


def W_second_derivative(x, eta: float):
    """W''(x) = -3 (eta - x) R(x) / ((x - x1)^4 (x - x3)^4)."""
    x1, x3 = _critical_points(eta)
    x = np.asarray(x, dtype=float)
    return -3.0 * (eta - x) * R_cubic(x, eta) / ((x - x1) ** 4 * (x - x3) ** 4)


def discriminant_closed_form(eta: float) -> float:
    """Disc_x(R) = -4 (4 eta + 1)(4 eta^2 - 16 eta + 27) eta^4."""
    return float(-4.0 * (4.0 * eta + 1.0) * (4.0 * eta ** 2 - 16.0 * eta + 27.0) * eta ** 4)


def discriminant_numeric(eta: float) -> float:
    """Discriminant of R computed from its coefficients."""
    A = 1.0 - 2.0 * eta
    B = eta * (6.0 * eta - 7.0)
    C = -3.0 * eta ** 2 * (2.0 * eta - 3.0)
    D = eta ** 2 * (2.0 * eta + 1.0) * (eta - 2.0)
    return float(18 * A * B * C * D - 4 * B ** 3 * D + B ** 2 * C ** 2
                 - 4 * A * C ** 3 - 27 * A ** 2 * D ** 2)


def setup_from_eta(eta: float) -> ChiconeSetup:
    """Critical points of V for a given eta; x2 solves V(x2) = V(x1) on (0, eta)."""
    _check_eta(eta)
    x1, x3 = _critical_points(eta)
    level = float(hamiltonian_potential(x1, eta))
    x2 = bracketed_root(lambda x: float(hamiltonian_potential(x, eta)) - level,
                        0.0, eta * (1.0 - 1e-12))
    return ChiconeSetup(eta=float(eta), x1=float(x1), x2=x2, x3=float(x3), h_star=level)


def chicone_setup(p: WaveParams) -> ChiconeSetup:
    """ChiconeSetup at the interior point p, with eta = (c - phi2)/phi2."""
    roots = require_interior(p)
    return setup_from_eta(roots.gap2 / roots.phi2)


def energy_level(p: WaveParams) -> float:
    """Energy h of the orbit in the rescaled system: b = phi2^2 (h + eta - 1/2)."""
    roots = require_interior(p)
    eta = roots.gap2 / roots.phi2
    return float(p.b / roots.phi2 ** 2 - eta + 0.5)


def verify_eta(eta: float, n_grid: int = 1000) -> dict:
    """
    Run the convexity checks for one eta.

    Checks:
        r_negative: R(x) < 0 on a grid over [x1, x2].
        w_convex: W''(x) > 0 from the closed form on (x1, x2), excluding
            1e-6 neighborhoods of the endpoints.
        discriminant_negative: both the closed-form and the coefficient
            discriminant of R are negative.
        finite_difference_agrees: second differences of W have the same sign
            away from x1 and from the center x = 0.

    Returns:
        dict: The setup, every check and 'passed'.
    """
    setup = setup_from_eta(eta)
    x1, x2 = setup.x1, setup.x2
    span = x2 - x1
    grid = np.linspace(x1, x2, n_grid)
    r_negative = bool(np.all(R_cubic(grid, eta) < 0))

    inner = grid[(grid > x1 + ENDPOINT_EXCLUSION * span) & (grid < x2 - ENDPOINT_EXCLUSION * span)]
    w2 = W_second_derivative(inner, eta)
    w_convex = bool(np.all(w2 > 0))

    disc_closed = discriminant_closed_form(eta)
    disc_numeric = discriminant_numeric(eta)
    discriminant_negative = disc_closed < 0 and disc_numeric < 0

    step = 1e-3 * span
    probe = grid[(grid > x1 + 0.05 * span) & (grid < x2 - 2 * step)]
    fd = (chicone_W(probe + step, eta) - 2.0 * chicone_W(probe, eta)
          + chicone_W(probe - step, eta)) / step ** 2
    fd_agrees = bool(np.all(np.sign(fd) == np.sign(W_second_derivative(probe, eta))))

    report = {
        **asdict(setup),
        'r_negative': r_negative,
        'w_convex': w_convex,
        'discriminant_closed_form': disc_closed,
        'discriminant_numeric': disc_numeric,
        'discriminant_negative': bool(discriminant_negative),
        'finite_difference_agrees': fd_agrees,
        'min_w2': float(w2.min()) if w2.size else float('nan'),
        'max_r': float(R_cubic(grid, eta).max()),
    }
    report['passed'] = r_negative and w_convex and report['discriminant_negative'] and fd_agrees
    if not report['passed']:
        logger.warning('convexity checks failed for eta=%.6g', eta)
    return report


def verify_monotonicity(p: WaveParams, n_grid: int = 1000) -> dict:
    """verify_eta at the eta of p, plus the energy level h of the orbit."""
    setup = chicone_setup(p)
    report = verify_eta(setup.eta, n_grid)
    report['h'] = energy_level(p)
    report['params'] = p.to_dict()
    return report
