"""
Wave Family Geometry

Parameter-space geometry of the smooth periodic traveling waves with speed
c > 0. A wave is fixed by two integration constants (a, b); the waves exist
for a in (0, a_c), a_c = 4c^3/27, and b strictly between the constant-wave
boundary b_-(a) and the solitary-wave boundary b_+(a). The segment a = 0,
b in (-c^2/2, 0) closes the region with peaked waves.

Roots and turning points are solved on brackets that follow from the
ordering 0 < phi1 < c/3 < phi2 < c < phi3, and the roots close to the pole
phi = c are solved for their distance to c so that no precision is lost
when a is small.
"""

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from utils.logging_config import get_logger
from utils.tools import bracketed_root
from waves.errors import (DegenerateRoots, DomainError, NearSolitaryWarning,
                          NotInRegion, OutsideRegion)

logger = get_logger(__name__)

DEFAULT_REGION_TOL = 1e-9
SOLITARY_GUARD = 1e-8


@dataclass(frozen=True)
class WaveParams:
    """Integration constants (a, b) and wave speed c."""
    a: float
    b: float
    c: float

    def to_dict(self) -> dict:
        return {'a': self.a, 'b': self.b, 'c': self.c}


@dataclass(frozen=True)
class CubicRoots:
    """
    Roots of a = phi (c - phi)^2 ordered as phi1 < c/3 < phi2 < c < phi3.

    ``gap2`` = c - phi2 and ``gap3`` = phi3 - c are kept separately at full
    relative precision.
    """
    phi1: float
    phi2: float
    phi3: float
    gap2: float
    gap3: float


@dataclass(frozen=True)
class TurningPoints:
    """Minimum phi_minus and maximum phi_plus of the profile; gap_plus = c - phi_plus."""
    phi_minus: float
    phi_plus: float
    gap_plus: float


class RegionClass(str, Enum):
    INTERIOR = 'Interior'
    BOUNDARY_CONSTANT = 'BoundaryConstant'
    BOUNDARY_SOLITARY = 'BoundarySolitary'
    BOUNDARY_PEAKED = 'BoundaryPeaked'
    OUTSIDE = 'Outside'


def _require_speed(c: float):
    if not np.isfinite(c) or c <= 0:
        raise DomainError(f"wave speed must be positive, got c={c!r}")


def critical_value_a(c: float) -> float:
    """
    Upper end a_c = 4c^3/27 of the admissible range of a.

    Example:
        >>> critical_value_a(3.0)
        4.0
    """
    _require_speed(c)
    return 4.0 * c ** 3 / 27.0


def cubic_roots(a: float, c: float) -> CubicRoots:
    """
    Three real roots of the cubic a = phi (c - phi)^2.

    Args:
        a (float): Integration constant, 0 < a < a_c.
        c (float): Wave speed.

    Returns:
        CubicRoots: Ordered roots with the gaps to the pole.

    Raises:
        OutsideRegion: If a is not in (0, a_c).
        DegenerateRoots: If a lies within 1e-12 a_c of either end.
    """
    a_c = critical_value_a(c)
    if not (0.0 < a < a_c):
        raise OutsideRegion(f"a={a!r} is outside (0, a_c={a_c:.17g}) for c={c!r}")
    if a < 1e-12 * a_c or a > (1.0 - 1e-12) * a_c:
        raise DegenerateRoots(f"roots coalesce at a={a!r} (a_c={a_c:.17g})")

    phi1 = bracketed_root(lambda x: x * (c - x) ** 2 - a, 0.0, c / 3.0)
    # a = (c - d) d^2 for d = c - phi2 in (0, 2c/3)
    gap2 = bracketed_root(lambda d: (c - d) * d * d - a, 0.0, 2.0 * c / 3.0)
    # a = (c + d) d^2 for d = phi3 - c in (0, 2c/3)
    gap3 = bracketed_root(lambda d: (c + d) * d * d - a, 0.0, 2.0 * c / 3.0)
    return CubicRoots(phi1=phi1, phi2=c - gap2, phi3=c + gap3, gap2=gap2, gap3=gap3)


def newton_potential(phi, p: WaveParams):
    """
    Potential U(phi) = -phi^2/2 + a/(c - phi); the wave is the orbit of
    energy b in this potential.

    Raises:
        DomainError: At the pole phi = c when a != 0.
    """
    phi = np.asarray(phi, dtype=float)
    gap = p.c - phi
    if p.a != 0 and np.any(gap == 0):
        raise DomainError(f"potential has a pole at phi = c = {p.c!r}")
    with np.errstate(divide='ignore', invalid='ignore'):
        tail = np.where(gap == 0, 0.0, p.a / np.where(gap == 0, 1.0, gap))
    value = -0.5 * phi ** 2 + tail
    return float(value) if value.ndim == 0 else value


def boundary_b_minus(a: float, c: float) -> float:
    """Constant-wave boundary b_-(a) = c phi2 - (3/2) phi2^2."""
    phi2 = cubic_roots(a, c).phi2
    return phi2 * (c - 1.5 * phi2)


def boundary_b_plus(a: float, c: float) -> float:
    """Solitary-wave boundary b_+(a) = c phi1 - (3/2) phi1^2."""
    phi1 = cubic_roots(a, c).phi1
    return phi1 * (c - 1.5 * phi1)


def a_minus(b: float, c: float) -> float:
    """Inverse of the constant-wave boundary: the a with b_-(a) = b, b in (-c^2/2, c^2/6)."""
    _require_speed(c)
    if not (-0.5 * c * c < b < c * c / 6.0):
        raise DomainError(f"b={b!r} is outside (-c^2/2, c^2/6)")
    root = np.sqrt(c * c - 6.0 * b)
    phi2 = (c + root) / 3.0
    gap2 = (2.0 * c - root) / 3.0
    return float(phi2 * gap2 * gap2)


def a_plus(b: float, c: float) -> float:
    """Inverse of the solitary-wave boundary: the a with b_+(a) = b, b in (0, c^2/6)."""
    _require_speed(c)
    if not (0.0 < b < c * c / 6.0):
        raise DomainError(f"b={b!r} is outside (0, c^2/6)")
    root = np.sqrt(c * c - 6.0 * b)
    phi1 = 2.0 * b / (c + root)
    return float(phi1 * (c - phi1) ** 2)


def _check_interior(p: WaveParams) -> CubicRoots:
    roots = cubic_roots(p.a, p.c)
    b_lo = roots.phi2 * (p.c - 1.5 * roots.phi2)
    b_hi = roots.phi1 * (p.c - 1.5 * roots.phi1)
    if not (b_lo < p.b < b_hi):
        raise NotInRegion(
            f"b={p.b!r} is outside (b_-, b_+) = ({b_lo:.17g}, {b_hi:.17g}) at a={p.a!r}")
    if b_hi - p.b < SOLITARY_GUARD * p.c ** 2:
        warnings.warn(
            f"b={p.b!r} is within {SOLITARY_GUARD:g} c^2 of the solitary boundary; "
            "the period grows logarithmically here", NearSolitaryWarning, stacklevel=3)
    return roots


def require_interior(p: WaveParams) -> CubicRoots:
    """
    Validate that p lies strictly inside the existence region.

    Returns:
        CubicRoots: The roots of the cubic at (a, c).

    Raises:
        OutsideRegion, DegenerateRoots, NotInRegion
    """
    _require_speed(p.c)
    return _check_interior(p)


def turning_points(p: WaveParams) -> TurningPoints:
    """
    Turning points of the profile: the roots of (c - phi)(2b + phi^2) = 2a
    between phi1 and c.

    The two closed limits are returned explicitly: on the constant boundary
    both turning points equal phi2, and on the peaked segment a = 0 they are
    sqrt(2|b|) and c.

    Raises:
        NotInRegion: If (a, b) is neither interior nor one of the two limits.
    """
    _require_speed(p.c)
    c = p.c
    if p.a == 0.0:
        if -0.5 * c * c < p.b < 0.0:
            return TurningPoints(phi_minus=float(np.sqrt(-2.0 * p.b)), phi_plus=c, gap_plus=0.0)
        raise NotInRegion(f"peaked waves need b in (-c^2/2, 0), got b={p.b!r}")

    roots = cubic_roots(p.a, c)
    b_lo = roots.phi2 * (c - 1.5 * roots.phi2)
    if p.b == b_lo:
        return TurningPoints(phi_minus=roots.phi2, phi_plus=roots.phi2, gap_plus=roots.gap2)

    _check_interior(p)
    a, b = p.a, p.b
    phi_minus = bracketed_root(lambda x: (c - x) * (2.0 * b + x * x) - 2.0 * a,
                               roots.phi1, roots.phi2)
    gap_plus = bracketed_root(lambda d: d * (2.0 * b + (c - d) ** 2) - 2.0 * a,
                              0.0, roots.gap2)
    logger.debug('turning points (%.17g, %.17g) at %s', phi_minus, c - gap_plus, p)
    return TurningPoints(phi_minus=phi_minus, phi_plus=c - gap_plus, gap_plus=gap_plus)


def normalize_scaling(p: WaveParams) -> tuple:
    """
    Map (a, b, c) to the speed-one family: alpha = a/c^3, beta = b/c^2.

    Example:
        >>> normalize_scaling(WaveParams(0.4, 0.0, 2.0))
        (0.05, 0.0)
    """
    _require_speed(p.c)
    return p.a / p.c ** 3, p.b / p.c ** 2


def classify(p: WaveParams, tol: float = DEFAULT_REGION_TOL) -> RegionClass:
    """
    Locate (a, b, c) relative to the existence region.

    The test runs in normalized coordinates (alpha, beta) so the answer is
    invariant under the speed scaling; ``tol`` is the width of the boundary
    bands in those coordinates.

    Returns:
        RegionClass: Interior, one of the three boundaries, or Outside.
    """
    if not np.isfinite(p.c) or p.c <= 0:
        return RegionClass.OUTSIDE
    alpha, beta = normalize_scaling(p)
    alpha_c = 4.0 / 27.0

    # roots are not resolved below 1e-12 alpha_c, which joins the peaked band
    if abs(alpha) <= tol or 0.0 < alpha < 1e-12 * alpha_c:
        if -0.5 - tol <= beta <= tol:
            return RegionClass.BOUNDARY_PEAKED
        return RegionClass.OUTSIDE
    if alpha < 0 or alpha > alpha_c + tol:
        return RegionClass.OUTSIDE
    if alpha >= (1.0 - 1e-12) * alpha_c:
        if abs(beta - 1.0 / 6.0) <= tol:
            return RegionClass.BOUNDARY_CONSTANT
        return RegionClass.OUTSIDE

    roots = cubic_roots(alpha, 1.0)
    beta_lo = roots.phi2 * (1.0 - 1.5 * roots.phi2)
    beta_hi = roots.phi1 * (1.0 - 1.5 * roots.phi1)
    if beta < beta_lo - tol or beta > beta_hi + tol:
        return RegionClass.OUTSIDE
    if abs(beta - beta_lo) <= tol:
        return RegionClass.BOUNDARY_CONSTANT
    if abs(beta - beta_hi) <= tol:
        return RegionClass.BOUNDARY_SOLITARY
    return RegionClass.INTERIOR


def constant_period(a: float, c: float) -> float:
    """
    Limit of the period on the constant-wave boundary: 2 pi / omega with
    omega^2 = 2a/(c - phi2)^3 - 1.
    """
    roots = cubic_roots(a, c)
    omega_sq = 2.0 * a / roots.gap2 ** 3 - 1.0
    return float(2.0 * np.pi / np.sqrt(omega_sq))


def constant_period_from_b(b: float, c: float) -> float:
    """Same limit in terms of b: omega^2 = 3 s / (2c - s) with s = sqrt(c^2 - 6b)."""
    _require_speed(c)
    s = np.sqrt(c * c - 6.0 * b)
    return float(2.0 * np.pi / np.sqrt(3.0 * s / (2.0 * c - s)))


def b_from_constant_period(L: float, c: float) -> float:
    """The b on the constant-wave boundary whose limiting period equals L."""
    _require_speed(c)
    if L <= 0:
        raise DomainError(f"period must be positive, got L={L!r}")
    return float(c * c / 6.0 * (1.0 - 64.0 * np.pi ** 4 / (4.0 * np.pi ** 2 + 3.0 * L * L) ** 2))


def peaked_period(b: float, c: float) -> float:
    """Period of the peaked wave at a = 0: 2 arccosh(c / sqrt(2|b|)), b in (-c^2/2, 0)."""
    _require_speed(c)
    if not (-0.5 * c * c < b < 0.0):
        raise DomainError(f"peaked waves need b in (-c^2/2, 0), got b={b!r}")
    return float(2.0 * np.arccosh(c / np.sqrt(-2.0 * b)))


def peaked_b(L: float, c: float) -> float:
    """Inverse of peaked_period: b = -c^2 / (2 cosh^2(L/2))."""
    _require_speed(c)
    if L <= 0:
        raise DomainError(f"period must be positive, got L={L!r}")
    return float(-c * c / (2.0 * np.cosh(0.5 * L) ** 2))


def shape_threshold(c: float) -> float:
    """The b below which a -> period is increasing: -(1 - sqrt(2/3)) c^2."""
    return -(1.0 - np.sqrt(2.0 / 3.0)) * c * c


def a_shape(b: float, c: float) -> str:
    """
    Shape of a -> period at fixed b.

    Returns:
        str: 'increasing' for b <= -(1 - sqrt(2/3)) c^2, 'single_maximum' for
        b between that threshold and 0, 'decreasing' for b >= 0.
    """
    _require_speed(c)
    if b <= shape_threshold(c):
        return 'increasing'
    if b < 0.0:
        return 'single_maximum'
    return 'decreasing'


def gv_nu(b: float, c: float) -> float:
    """
    Parameter nu = (2c / sqrt(c^2 - 6b) - 1)/6 of the rescaled planar system
    x' = y, y' = -(y^2 + x - 3x^2) / (2(x + nu)).
    """
    _require_speed(c)
    if b >= c * c / 6.0:
        raise DomainError(f"b must be below c^2/6, got b={b!r}")
    return float((2.0 * c / np.sqrt(c * c - 6.0 * b) - 1.0) / 6.0)


def boundary_curves(c: float, n: int = 200) -> dict:
    """
    Sampled boundaries of the existence region.

    Returns:
        dict: 'a' grid on (0, a_c), 'b_minus' and 'b_plus' on that grid,
        'peaked_b' samples of the segment a = 0, and the 'corner' (a_c, c^2/6).
    """
    a_c = critical_value_a(c)
    a_grid = a_c * np.linspace(0.0, 1.0, n + 2)[1:-1]
    b_lo = np.array([boundary_b_minus(a, c) for a in a_grid])
    b_hi = np.array([boundary_b_plus(a, c) for a in a_grid])
    return {
        'a': a_grid,
        'b_minus': b_lo,
        'b_plus': b_hi,
        'peaked_b': np.linspace(-0.5 * c * c, 0.0, n),
        'corner': (a_c, c * c / 6.0),
    }
