"""
Sign-change bracketing and bisection for scalar transcendental equations.
"""
import math
from typing import Callable, Iterable, List, Optional, Tuple

MAX_BISECTIONS = 200


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    f_lo: Optional[float] = None,
    f_hi: Optional[float] = None,
) -> float:
    """
    Bisection on a bracketing interval.

    Args:
        f (Callable[[float], float]): Function changing sign on [lo, hi].
        lo (float): Left end.
        hi (float): Right end.
        tol (float): Absolute tolerance on the root location.
        f_lo (float): Cached f(lo), evaluated when omitted.
        f_hi (float): Cached f(hi), evaluated when omitted.

    Returns:
        float: Midpoint of the final bracket, or an exact zero if one is hit.

    Raises:
        ValueError: If f(lo) and f(hi) have the same strict sign.
    """
    if f_lo is None:
        f_lo = f(lo)
    if f_hi is None:
        f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]")

    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_changes(points: Iterable[float], values: Iterable[float]) -> List[Tuple[float, float]]:
    """
    Lists the grid cells whose end values have opposite signs.

    Grid points where the value is exactly zero are returned as degenerate
    cells ``(p, p)`` and the neighbouring cells are not reported again.

    Args:
        points (Iterable[float]): Ascending abscissae.
        values (Iterable[float]): Function values at the abscissae.

    Returns:
        List[Tuple[float, float]]: Bracketing cells in ascending order.
    """
    cells = []
    prev_p = prev_v = None
    for p, v in zip(points, values):
        if not math.isfinite(v):
            prev_p = prev_v = None
            continue
        if v == 0.0:
            cells.append((p, p))
            prev_p = prev_v = None
            continue
        if prev_v is not None and math.copysign(1.0, v) != math.copysign(1.0, prev_v):
            cells.append((prev_p, p))
        prev_p, prev_v = p, v
    return cells


def scan_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    step: float,
    tol: float = 1e-10,
) -> List[float]:
    """
    Locates every simple root of a continuous function on a uniform grid.

    Args:
        f (Callable[[float], float]): Continuous function.
        lo (float): Start of the scan.
        hi (float): End of the scan.
        step (float): Grid step; roots closer than this may be missed.
        tol (float): Bisection tolerance.

    Returns:
        List[float]: Ascending roots.
    """
    count = int(math.ceil((hi - lo) / step))
    points = [lo + k * step for k in range(count + 1)]
    values = [f(p) for p in points]
    roots = []
    for a, b in sign_changes(points, values):
        roots.append(a if a == b else bisect(f, a, b, tol))
    return roots
