"""Small root-finding and line-search helpers used by the solvers.

All equilibrium equations in this package are monotone in their unknown,
so plain bisection with explicit sign checks is enough and keeps the
tolerance accounting transparent.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .model import SolverError


def bisect_increasing(f: Callable[[float], float], lo: float, hi: float,
                      *, xtol: float = 1e-13, max_iter: int = 256) -> float:
    """Root of an increasing function with f(lo) <= 0 <= f(hi)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo > 0.0 or fhi < 0.0:
        raise SolverError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid == lo or mid == hi:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_decreasing(f: Callable[[float], float], lo: float, hi: float,
                      *, xtol: float = 1e-13, max_iter: int = 256) -> float:
    return bisect_increasing(lambda x: -f(x), lo, hi, xtol=xtol, max_iter=max_iter)


def bisect_increasing_vec(f: Callable[[np.ndarray], np.ndarray],
                          lo: np.ndarray, hi: np.ndarray, *,
                          iters: int = 55) -> np.ndarray:
    """Lock-step bisection over arrays; caller guarantees the sign change.

    55 halvings of a unit interval reach ~3e-17, well under the solver
    tolerances used in this package.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        neg = f(mid) < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return 0.5 * (lo + hi)


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               *, xtol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Golden-section maximum of a continuous function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
