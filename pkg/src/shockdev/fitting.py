"""Shared numerical utilities: high-order differencing, sequence

extrapolation, small-parameter fits, and safeguarded scalar root solves.
These are deliberately plain so they can double as independent oracles in
the test suite.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NoRoot, NonConvergence

__all__ = [
    "derivative",
    "mixed_second",
    "richardson",
    "power_law_fit",
    "extrapolate_to_zero",
    "quadratic_extrapolate",
    "bisection_root",
    "safeguarded_newton",
]

# central stencils of 4th-order accuracy: order -> (offsets, coefficients)
_STENCILS = {
    1: ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
    2: ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
    3: (
        (-3, -2, -1, 1, 2, 3),
        (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8),
    ),
    4: (
        (-3, -2, -1, 0, 1, 2, 3),
        (-1 / 6, 2.0, -13 / 2, 28 / 3, -13 / 2, 2.0, -1 / 6),
    ),
}


def derivative(f: Callable, x: float, order: int = 1, step: float = 1e-3) -> float:
    """n-th derivative of a scalar function by a 4th-order central stencil.

    Args:
        f: scalar function.
        x: evaluation point.
        order: derivative order, 1 through 4.
        step: stencil spacing.
    """
    if order not in _STENCILS:
        raise ValueError(f"unsupported derivative order {order}")
    offsets, coeffs = _STENCILS[order]
    acc = 0.0
    for off, c in zip(offsets, coeffs):
        acc += c * f(x + off * step)
    return acc / step**order


def mixed_second(
    f: Callable, x: float, y: float, step_x: float = 1e-3, step_y: float = 1e-3
) -> float:
    """Mixed second derivative d2 f / dx dy (4th order in both directions)."""
    offs, cs = _STENCILS[1]
    acc = 0.0
    for ox, cx in zip(offs, cs):
        for oy, cy in zip(offs, cs):
            acc += cx * cy * f(x + ox * step_x, y + oy * step_y)
    return acc / (step_x * step_y)


def richardson(coarse: float, fine: float, order: int, ratio: float = 2.0) -> float:
    """Eliminate the leading O(step^order) error from two estimates.

    Args:
        coarse: estimate at step h.
        fine: estimate at step h/ratio.
        order: order of the leading error term.
    """
    w = ratio**order
    return (w * fine - coarse) / (w - 1.0)


def power_law_fit(x, y, drop: int = 3, decade: bool = True):
    """Fit |y| ~ C x^p on a log-log least-squares line.

    Uses the smallest available decade of x, excluding the ``drop`` nodes
    nearest zero (where relative discretization noise is worst).

    Returns:
        (exponent, prefactor).
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    order = np.argsort(x)
    x, y = x[order], y[order]
    keep = (x > 0) & (y > 0)
    x, y = x[keep], y[keep]
    if drop and len(x) > drop + 3:
        x, y = x[drop:], y[drop:]
    if decade:
        sel = x <= 10.0 * x[0]
        if np.count_nonzero(sel) >= 4:
            x, y = x[sel], y[sel]
    if len(x) < 2:
        raise ValueError("power_law_fit needs at least 2 usable points")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(math.exp(intercept))


def extrapolate_to_zero(x, y, degree: int = 2, drop: int = 3, span: float | None = None):
    """Least-squares polynomial extrapolation of y(x) to x = 0.

    Excludes the ``drop`` nodes nearest zero; optionally restricts to
    x <= span.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    if drop and len(x) > drop + degree + 2:
        x, y = x[drop:], y[drop:]
    if span is not None:
        sel = x <= span
        if np.count_nonzero(sel) >= degree + 2:
            x, y = x[sel], y[sel]
    coeffs = np.polynomial.polynomial.polyfit(x, y, degree)
    return float(coeffs[0])


def quadratic_extrapolate(x, y) -> float:
    """Value at 0 of the parabola through three (x, y) samples."""
    (x1, x2, x3), (y1, y2, y3) = x, y
    l1 = (0 - x2) * (0 - x3) / ((x1 - x2) * (x1 - x3))
    l2 = (0 - x1) * (0 - x3) / ((x2 - x1) * (x2 - x3))
    l3 = (0 - x1) * (0 - x2) / ((x3 - x1) * (x3 - x2))
    return float(y1 * l1 + y2 * l2 + y3 * l3)


def bisection_root(
    f: Callable,
    lo: float,
    hi: float,
    xtol: float = 1e-14,
    max_iter: int = 200,
) -> float:
    """Plain bisection; the Newton-free oracle used for cross-checking.

    Raises:
        NoRoot: if [lo, hi] does not bracket a sign change.
    """
    fa, fb = f(lo), f(hi)
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if fa * fb > 0:
        raise NoRoot(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (hi - lo) < xtol:
            return mid
        if fa * fm < 0:
            hi, fb = mid, fm
        else:
            lo, fa = mid, fm
    return 0.5 * (lo + hi)


def safeguarded_newton(
    f: Callable,
    df: Callable,
    x0: float,
    lo: float,
    hi: float,
    f_tol: float,
    max_iter: int = 60,
    polish: int = 6,
) -> float:
    """Newton iteration confined to [lo, hi] with bisection fallback.

    The interval need not bracket a sign change; a bracket is adopted as
    soon as the evaluations expose one. After meeting ``f_tol`` the iterate
    is polished with further Newton steps until |f| stops decreasing, so the
    returned root is a machine-precision fixed point (callers difference
    downstream quantities against 1/v^2-amplified scales and cannot afford
    tolerance-band jitter).

    Raises:
        NoRoot: Newton made no progress and no sign change exists in range.
        NonConvergence: iteration budget exhausted.
    """

    def _polish(x, fx):
        for _ in range(polish):
            d = df(x)
            if d == 0.0 or not math.isfinite(d):
                break
            xn = x - fx / d
            if xn == x or not math.isfinite(xn):
                break
            fn = f(xn)
            if abs(fn) >= abs(fx):
                break
            x, fx = xn, fn
        return x

    blo, bhi = float(lo), float(hi)
    flo, fhi = f(blo), f(bhi)
    if abs(flo) < f_tol:
        return _polish(blo, flo)
    if abs(fhi) < f_tol:
        return _polish(bhi, fhi)
    bracketed = flo * fhi < 0

    x = min(max(float(x0), blo), bhi)
    fx = f(x)
    for _ in range(max_iter):
        if abs(fx) < f_tol:
            return _polish(x, fx)
        # tighten any bracket we have using the latest evaluation
        if bracketed:
            if flo * fx <= 0:
                bhi, fhi = x, fx
            else:
                blo, flo = x, fx
        d = df(x)
        xn = x - fx / d if d != 0 and math.isfinite(d) else math.nan
        inside = math.isfinite(xn) and blo < xn < bhi
        if not inside:
            if not bracketed:
                raise NoRoot(
                    f"newton left [{lo}, {hi}] without a sign change to fall back on"
                )
            xn = 0.5 * (blo + bhi)
        x = xn
        fx = f(x)
        if not bracketed and flo * fx < 0:
            bracketed, bhi, fhi = True, x, fx
        elif not bracketed and fhi * fx < 0:
            bracketed, blo, flo = True, x, fx
    raise NonConvergence(
        f"newton/bisection did not reach |f| < {f_tol} in {max_iter} iterations"
    )
