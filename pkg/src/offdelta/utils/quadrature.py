"""
Adaptive Simpson quadrature over piecewise-smooth integrands.
"""
from typing import Callable, Sequence, Tuple


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> Tuple[float, float, bool]:
    """
    Adaptive Simpson's rule with Richardson correction on each accepted panel.

    Args:
        f (Callable[[float], float]): Smooth integrand on [a, b].
        a (float): Lower bound.
        b (float): Upper bound.
        tol (float): Absolute tolerance of the whole interval.
        max_depth (int): Maximum recursion depth.

    Returns:
        Tuple[float, float, bool]: (integral, error estimate, converged).
        ``converged`` is False when some panel hit ``max_depth``.
    """
    if a == b:
        return 0.0, 0.0, True
    if a > b:
        value, error, converged = adaptive_simpson(f, b, a, tol, max_depth)
        return -value, error, converged

    def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def _adaptive(a, b, fa, fm, fb, whole, depth, tol):
        m = 0.5 * (a + b)
        h = 0.5 * (b - a)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = _simpson(fa, flm, fm, 0.5 * h)
        right = _simpson(fm, frm, fb, 0.5 * h)
        delta = (left + right - whole) / 15.0

        # depth >= 4 keeps a coarse first pass from accepting a lucky zero estimate
        if depth >= 4 and abs(delta) < tol:
            return left + right + delta, abs(delta), True
        if depth >= max_depth:
            return left + right + delta, abs(delta), False

        lv, le, lc = _adaptive(a, m, fa, flm, fm, left, depth + 1, 0.5 * tol)
        rv, re, rc = _adaptive(m, b, fm, frm, fb, right, depth + 1, 0.5 * tol)
        return lv + rv, le + re, lc and rc

    fa = f(a)
    fb = f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, 0.5 * (b - a))
    return _adaptive(a, b, fa, fm, fb, whole, 0, tol)


def composite_simpson(
    f: Callable[[float], float],
    breakpoints: Sequence[float],
    tol: float = 1e-10,
    max_depth: int = 50,
) -> Tuple[float, float, bool]:
    """
    Integrates across a sorted list of breakpoints, one adaptive rule per piece.

    Kinks of the integrand (the delta positions) must be breakpoints so every
    piece is smooth.

    Args:
        f (Callable[[float], float]): Integrand.
        breakpoints (Sequence[float]): Ascending interval ends, at least two.
        tol (float): Absolute tolerance per piece.
        max_depth (int): Recursion cap per piece.

    Returns:
        Tuple[float, float, bool]: (integral, summed error estimate, converged).
    """
    points = sorted(set(float(p) for p in breakpoints))
    total = 0.0
    error = 0.0
    converged = True
    for lo, hi in zip(points[:-1], points[1:]):
        value, err, ok = adaptive_simpson(f, lo, hi, tol, max_depth)
        total += value
        error += err
        converged = converged and ok
    return total, error, converged
