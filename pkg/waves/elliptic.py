"""
Elliptic Functions

Complete elliptic integral of the first kind and the Jacobi functions
sn, cn, dn. Everything is driven by one arithmetic-geometric mean sequence:
K(k) = pi / (2 agm(1, k')) and the Jacobi amplitude comes from the
descending Landen recursion seeded by the same sequence.

All entry points take the modulus k (not the parameter m = k^2) and accept
an optional complementary modulus k' = sqrt(1 - k^2) so that callers who
know k' to full relative precision near k = 1 do not lose it.
"""

import numpy as np

from waves.errors import DomainError

_EPS = np.finfo(float).eps
_MAX_STEPS = 64


def _moduli(k: float, kprime: float = None) -> tuple:
    k = float(k)
    if not np.isfinite(k) or k < 0.0 or k >= 1.0:
        raise DomainError(f"elliptic modulus must satisfy 0 <= k < 1, got {k!r}")
    if kprime is None:
        kprime = np.sqrt((1.0 - k) * (1.0 + k))
    kprime = float(kprime)
    if not (0.0 < kprime <= 1.0):
        raise DomainError(f"complementary modulus must lie in (0, 1], got {kprime!r}")
    return k, kprime


def agm(x: float, y: float) -> float:
    """
    Arithmetic-geometric mean of two non-negative numbers.

    Example:
        >>> agm(1.0, 1.0)
        1.0
    """
    if x < 0 or y < 0:
        raise DomainError("agm is defined for non-negative arguments")
    a, b = float(x), float(y)
    for _ in range(_MAX_STEPS):
        if abs(a - b) <= 2 * _EPS * a:
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(k: float, kprime: float = None) -> float:
    """
    Complete elliptic integral of the first kind K(k).

    Args:
        k (float): Modulus, 0 <= k < 1.
        kprime (float): Optional complementary modulus sqrt(1 - k^2).

    Returns:
        float: K(k), with K(0) = pi/2 and K -> infinity as k -> 1.

    Raises:
        DomainError: If k lies outside [0, 1).
    """
    _, kprime = _moduli(k, kprime)
    return float(np.pi / (2.0 * agm(1.0, kprime)))


def _landen_sequence(k: float, kprime: float) -> tuple:
    a_seq, c_seq = [1.0], [k]
    a, b = 1.0, kprime
    for _ in range(_MAX_STEPS):
        if abs(c_seq[-1]) <= _EPS * a:
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def jacobi_sncndn(u, k: float, kprime: float = None) -> tuple:
    """
    Jacobi sn, cn and dn evaluated together.

    The argument is reduced modulo the real period 4K(k) before the descending
    Landen recursion, so the periodicity cn(u + 4K) = cn(u) holds to
    rounding level. Scalars in give scalars out; arrays are evaluated
    elementwise.

    Args:
        u: Real argument (float or array).
        k (float): Modulus, 0 <= k < 1.
        kprime (float): Optional complementary modulus.

    Returns:
        tuple: (sn, cn, dn)
    """
    k, kprime = _moduli(k, kprime)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)

    quarter = complete_K(k, kprime)
    u = np.mod(u, 4.0 * quarter)

    a_seq, c_seq = _landen_sequence(k, kprime)
    n_steps = len(a_seq) - 1
    phi = (2.0 ** n_steps) * a_seq[-1] * u
    for n in range(n_steps, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c_seq[n] / a_seq[n] * np.sin(phi), -1.0, 1.0)))

    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(kprime * kprime + (k * cn) ** 2)
    if scalar:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def jacobi_cn(u, k: float, kprime: float = None):
    """cn(u; k), bounded in [-1, 1] with period 4K(k)."""
    return jacobi_sncndn(u, k, kprime)[1]


def jacobi_sn(u, k: float, kprime: float = None):
    """sn(u; k)."""
    return jacobi_sncndn(u, k, kprime)[0]


def jacobi_dn(u, k: float, kprime: float = None):
    """dn(u; k), bounded in [k', 1]."""
    return jacobi_sncndn(u, k, kprime)[2]
