import numpy as np
from scipy.optimize import brentq

from utils.logging_config import get_logger
from waves.errors import DerivativeFailure, NoSolution, QuadratureFailure

logger = get_logger(__name__)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_EPS = np.finfo(float).eps


def _panel_sums(f, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """32-point Gauss-Legendre sums on many panels with a single call to f"""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    values = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return half * (values @ _GL_WEIGHTS)


def adaptive_gauss_legendre(f, lo: float, hi: float, rtol: float = 1e-13,
                            atol: float = 0.0, max_panels: int = 1 << 16) -> float:
    """
    Integrate a vectorized function with 32-node Gauss-Legendre panels,
    bisecting every panel whose two halves disagree with the whole.

    Raises QuadratureFailure when the panel budget is exhausted.
    """
    if hi == lo:
        return 0.0
    lo_p = np.array([lo], dtype=float)
    hi_p = np.array([hi], dtype=float)
    whole = _panel_sums(f, lo_p, hi_p)
    total_width = abs(hi - lo)
    accepted = 0.0

    while lo_p.size:
        mid = 0.5 * (lo_p + hi_p)
        left = _panel_sums(f, lo_p, mid)
        right = _panel_sums(f, mid, hi_p)
        refined = left + right
        estimate = accepted + refined.sum()
        share = np.abs(hi_p - lo_p) / total_width
        allowed = np.maximum(atol, rtol * abs(estimate)) * share + 64 * _EPS * np.abs(refined)
        done = np.abs(refined - whole) <= allowed
        accepted += refined[done].sum()

        keep = ~done
        if not keep.any():
            break
        lo_p = np.concatenate([lo_p[keep], mid[keep]])
        hi_p = np.concatenate([mid[keep], hi_p[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        if lo_p.size > max_panels:
            raise QuadratureFailure(
                f"Gauss-Legendre panel budget exhausted on [{lo}, {hi}]")

    return float(accepted)


def bracketed_root(f, lo: float, hi: float, xtol: float = 1e-300,
                   rtol: float = 4 * _EPS, maxiter: int = 400) -> float:
    """Brent root of f on [lo, hi]; NoSolution when the bracket has no sign change"""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return float(lo)
    if f_hi == 0.0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSolution(
            f"no sign change on [{lo:.17g}, {hi:.17g}] (f={f_lo:.3e}, {f_hi:.3e})")
    root = brentq(f, lo, hi, xtol=xtol, rtol=rtol, maxiter=maxiter)
    logger.debug('root %.17g in [%.6g, %.6g]', root, lo, hi)
    return float(root)


def richardson_derivative(f, x: float, h: float, lo: float = -np.inf,
                          hi: float = np.inf) -> tuple:
    """
    First derivative of f at x by Richardson-extrapolated differences.

    Central stencils x +- h and x +- h/2 are used when both fit strictly
    inside (lo, hi); otherwise a second-order one-sided stencil pointing
    away from the violated bound is used.

    f may return an array, in which case every component is differenced
    with the same stencil.

    Returns:
        tuple: (derivative, error_estimate)
    """
    if x - h > lo and x + h < hi:
        def stencil(step):
            return (f(x + step) - f(x - step)) / (2 * step)
    elif x + 2 * h < hi and x > lo:
        def stencil(step):
            return (-3 * f(x) + 4 * f(x + step) - f(x + 2 * step)) / (2 * step)
    elif x - 2 * h > lo and x < hi:
        def stencil(step):
            return (3 * f(x) - 4 * f(x - step) + f(x - 2 * step)) / (2 * step)
    else:
        raise DerivativeFailure(
            f"no stencil of width {h:.3g} fits around {x:.6g} in ({lo:.6g}, {hi:.6g})")

    coarse = np.asarray(stencil(h), dtype=float)
    fine = np.asarray(stencil(h / 2), dtype=float)
    extrapolated = (4 * fine - coarse) / 3
    error = np.abs(fine - coarse) / 3
    if extrapolated.ndim == 0:
        return float(extrapolated), float(error)
    return extrapolated, error
