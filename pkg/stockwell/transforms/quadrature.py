"""
Adaptive Simpson quadrature for complex valued integrands.
"""

import logging
from typing import Callable

logger = logging.getLogger(__name__)


def _simpson(fa: complex, fm: complex, fb: complex, a: float, b: float) -> complex:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth, min_depth, max_depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    delta = left + right - whole

    if depth >= max_depth or (depth >= min_depth and abs(delta) <= 15.0 * tol):
        # Richardson correction of the composite estimate
        return left + right + delta / 15.0, abs(delta) / 15.0

    left_value, left_error = _adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1, min_depth, max_depth)
    right_value, right_error = _adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1, min_depth, max_depth)
    return left_value + right_value, left_error + right_error


def adaptive_simpson(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-12,
    min_depth: int = 4,
    max_depth: int = 48,
) -> tuple[complex, float]:
    """
    Integrate ``f`` over ``[a, b]`` by recursive Simpson bisection.

    Each interval is split until the difference between the one-panel and the
    two-panel estimate is below fifteen times its share of the tolerance.
    The first ``min_depth`` levels are always refined so that narrow features
    are not skipped by a lucky initial sampling.

    Args:
        f: Scalar integrand, may return complex values.
        a: Lower limit.
        b: Upper limit, ``b >= a``.
        tol: Absolute tolerance of the whole integral.
        min_depth: Number of forced bisection levels.
        max_depth: Hard recursion limit.

    Returns:
        tuple: Integral estimate and the accumulated error estimate.
    """
    if b <= a:
        return 0j, 0.0
    fa = complex(f(a))
    fb = complex(f(b))
    fm = complex(f(0.5 * (a + b)))
    whole = _simpson(fa, fm, fb, a, b)
    value, error = _adaptive(lambda x: complex(f(x)), a, b, fa, fm, fb, whole, tol, 0, min_depth, max_depth)
    logger.debug("Adaptive Simpson on [%g, %g]: %s +- %g", a, b, value, error)
    return value, error
