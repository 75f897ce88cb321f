"""
Physicists' Hermite polynomials H_n and their roots.
"""
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from offdelta.utils.errors import DomainError

MAX_DEGREE = 60
_NEWTON_STEPS = 3


def _hermite_pair(n: int, y: float) -> Tuple[float, float]:
    # (H_n(y), H_{n-1}(y)) by the three-term recurrence
    prev, cur = 0.0, 1.0
    for k in range(n):
        prev, cur = cur, 2.0 * y * cur - 2.0 * k * prev
    return cur, prev


def hermite_value(n: int, y: float) -> float:
    """
    H_n(y) via H_{k+1} = 2y H_k - 2k H_{k-1}.

    Args:
        n (int): Degree, 0 <= n <= 60.
        y (float): Argument.

    Returns:
        float: H_n(y).
    """
    if n < 0 or n > MAX_DEGREE:
        raise DomainError(f"Hermite degree must lie in [0, {MAX_DEGREE}], got {n}")
    return _hermite_pair(n, float(y))[0]


@lru_cache(maxsize=None)
def _roots(n: int) -> Tuple[float, ...]:
    k = np.arange(1, n)
    off_diagonal = np.sqrt(k / 2.0)
    nodes = eigvalsh_tridiagonal(np.zeros(n), off_diagonal)
    polished = []
    for y in np.sort(nodes):
        y = float(y)
        for _ in range(_NEWTON_STEPS):
            h, h_prev = _hermite_pair(n, y)
            slope = 2.0 * n * h_prev
            if slope == 0.0:
                break
            y -= h / slope
        polished.append(y)
    if n % 2:
        # the middle root of an odd-degree polynomial is exactly the origin
        polished[n // 2] = 0.0
    return tuple(polished)


def hermite_roots(n: int) -> List[float]:
    """
    All real roots of H_n in ascending order.

    The roots are the eigenvalues of the symmetric Jacobi matrix of the
    recurrence (zero diagonal, off-diagonal sqrt(k/2)), polished by Newton.

    Args:
        n (int): Degree, 1 <= n <= 60.

    Returns:
        List[float]: n ascending roots, symmetric about 0.
    """
    if n < 1 or n > MAX_DEGREE:
        raise DomainError(f"Hermite degree must lie in [1, {MAX_DEGREE}], got {n}")
    return list(_roots(n))


def hermite_scale(n: int, y: float) -> float:
    """
    Magnitude scale sum_k |a_k| |y|^k of H_n at y, for relative residual checks.
    """
    coefficients = np.polynomial.hermite.herm2poly([0] * n + [1])
    return float(np.sum(np.abs(coefficients) * np.abs(y) ** np.arange(n + 1)))
