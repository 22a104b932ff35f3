"""Scalar root isolation: uniform sign-change scan plus bisection.

The fixed-point residuals solved here are continuous with a handful of
isolated roots, so a derivative-free scan-and-bisect is both robust and
applicable to tabulated noise where no derivative is available.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ToleranceNotReached

__all__ = ["bisect_sign_change", "find_roots", "classify_stability"]

MAX_BISECTIONS = 200
# Bisect essentially down to machine width; the tol argument is then a
# residual guarantee rather than an interval size.
_WIDTH_FLOOR = 1e-15


def classify_stability(map_derivative: float, band: float = 1e-9) -> str:
    """Classify a fixed point from the iteration-map slope |T'| against 1.

    The +-band dead zone makes the exactly-critical case deterministic.
    """
    t = abs(map_derivative)
    if t < 1.0 - band:
        return "stable"
    if t > 1.0 + band:
        return "unstable"
    return "marginal"


def bisect_sign_change(f, lo, hi, f_lo=None, f_hi=None, tol=1e-12) -> float:
    """Bisect a sign change of f on [lo, hi] down to machine width.

    Raises ToleranceNotReached if the iteration budget runs out before the
    midpoint residual |f| drops to tol.
    """
    a, b = float(lo), float(hi)
    fa = float(f(a)) if f_lo is None else float(f_lo)
    fb = float(f(b)) if f_hi is None else float(f_hi)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise DomainError("bisection requires a sign change on [lo, hi]")
    mid = 0.5 * (a + b)
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (a + b)
        fm = float(f(mid))
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
        if b - a <= _WIDTH_FLOOR:
            mid = 0.5 * (a + b)
            break
    if abs(float(f(mid))) > tol:
        raise ToleranceNotReached(
            f"bisection stalled with residual above {tol:g}")
    return mid


def find_roots(f, lo=-1.0, hi=1.0, scan_step=1e-3, tol=1e-12) -> list[float]:
    """All sign-change roots of f on [lo, hi], sorted ascending.

    f must accept both scalars and 1-d arrays.  Exact zeros at scan points
    are taken as roots directly; strict sign changes between neighbouring
    scan points are bisected.
    """
    if scan_step <= 0:
        raise DomainError("scan_step must be positive")
    if tol <= 0:
        raise DomainError("tol must be positive")
    n = max(int(round((hi - lo) / scan_step)) + 1, 2)
    xs = np.linspace(lo, hi, n)
    fs = np.asarray(f(xs), dtype=float)
    roots = [float(x) for x, v in zip(xs, fs) if v == 0.0]
    signs = np.sign(fs)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        roots.append(
            bisect_sign_change(f, xs[i], xs[i + 1], fs[i], fs[i + 1], tol))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= 1e-12:
            continue
        merged.append(r)
    return merged
