"""One-dimensional search primitives: golden-section refinement and bisection."""
from __future__ import annotations

import math
from typing import Callable

from .errors import ConvergenceError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_ITER = 400


def golden_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Maximize a unimodal f on [lo, hi] to interval width tol.

    Ties collapse leftward, so on a flat plateau the leftmost point wins.
    Returns (argmax, max).
    """
    c = hi - (hi - lo) * _INVPHI
    d = lo + (hi - lo) * _INVPHI
    fc, fd = f(c), f(d)
    for _ in range(_MAX_ITER):
        if hi - lo <= tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - (hi - lo) * _INVPHI
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + (hi - lo) * _INVPHI
            fd = f(d)
    else:
        raise ConvergenceError("golden-section search did not reach the target width")
    x = lo + (hi - lo) / 2.0
    return x, f(x)


def grid_golden_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    grid_points: int = 201,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Coarse grid scan followed by golden-section refinement around the best cell.

    Suited to concave objectives; the grid guards against premature brackets and
    the leftmost grid maximizer is preferred on ties.
    """
    step = (hi - lo) / (grid_points - 1)
    best_i = 0
    best_v = -math.inf
    vals = []
    for i in range(grid_points):
        v = f(lo + i * step)
        vals.append(v)
        if v > best_v:
            best_v = v
            best_i = i
    a = lo + max(best_i - 1, 0) * step
    b = lo + min(best_i + 1, grid_points - 1) * step
    x, fx = golden_max(f, a, b, tol)
    if fx > best_v:
        return x, fx
    return lo + best_i * step, best_v


def bisect_decreasing(
    g: Callable[[float], float], lo: float, hi: float, target: float, tol: float = 1e-12
) -> float:
    """Solve g(x) = target for strictly decreasing g with g(lo) > target > g(hi)."""
    for _ in range(_MAX_ITER):
        if hi - lo <= tol:
            break
        mid = (lo + hi) / 2.0
        if g(mid) > target:
            lo = mid
        else:
            hi = mid
    else:
        raise ConvergenceError("bisection did not reach the target width")
    return (lo + hi) / 2.0
