"""One-dimensional root bracketing and golden-section search."""

import math

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_decreasing(f, lo, hi, xtol, maxiter=400):
    """Root of a strictly decreasing ``f`` with f(lo) > 0 > f(hi).

    Stops early on an exact zero. Returns ``(root, lo, hi)``.
    """
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = f(mid)
        if v > 0:
            lo = mid
        elif v < 0:
            hi = mid
        else:
            return mid, mid, mid
    return 0.5 * (lo + hi), lo, hi


def bisect_decreasing_vec(f, lo, hi, xtol=0.0, iters=200):
    """Elementwise bisection for arrays of decreasing functions; f(lo) > 0 > f(hi) assumed."""
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi) & (hi - lo > xtol)
        if not np.any(active):
            break
        v = f(mid)
        pos = active & (v > 0)
        neg = active & (v < 0)
        zero = active & (v == 0)
        lo = np.where(pos | zero, mid, lo)
        hi = np.where(neg | zero, mid, hi)
    return 0.5 * (lo + hi)


def golden_section(f, lo, hi, tol=1e-12, maxiter=500, maximize=False):
    """Golden-section search on [lo, hi]; returns ``(x, f(x))``."""
    sgn = -1.0 if maximize else 1.0
    g = lambda x: sgn * f(x)  # noqa: E731
    x1 = hi - INVPHI * (hi - lo)
    x2 = lo + INVPHI * (hi - lo)
    f1, f2 = g(x1), g(x2)
    for _ in range(maxiter):
        if hi - lo <= tol * max(1.0, abs(lo) + abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INVPHI * (hi - lo)
            f1 = g(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INVPHI * (hi - lo)
            f2 = g(x2)
    x = x1 if f1 <= f2 else x2
    return x, sgn * min(f1, f2)
