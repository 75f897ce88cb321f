"""
Reference spectrum of the merged-delta problem (c = 0, strength 2g at the origin).

Even levels solve D_{Q+1}(0) + g D_Q(0) = 0, which with the closed form of
D_Q(0) reads sqrt(2)/Gamma(1/4 - eps/2) + g/Gamma(3/4 - eps/2) = 0. Odd
levels vanish at the origin and stay at n + 1/2.
"""
import math
from typing import List

import numpy as np
from scipy.optimize import brentq
from scipy.special import rgamma

_STEP = 0.01
_CHUNK = 8.0


def contact_condition(epsilon: float, g: float) -> float:
    return math.sqrt(2.0) * rgamma(0.25 - 0.5 * epsilon) + g * rgamma(0.75 - 0.5 * epsilon)


def contact_reference(g: float, count: int) -> List[float]:
    """
    Lowest even-sector energies of the merged-delta problem.

    Args:
        g (float): Coupling of each delta, finite.
        count (int): Number of energies.

    Returns:
        List[float]: Ascending energies.
    """
    if not math.isfinite(g):
        raise ValueError(f"g must be finite, got {g!r}")
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    lo = -g * g - 1.0 if g < 0.0 else 0.4
    roots: List[float] = []
    while len(roots) < count:
        grid = np.arange(lo, lo + _CHUNK + 0.5 * _STEP, _STEP)
        values = math.sqrt(2.0) * rgamma(0.25 - 0.5 * grid) + g * rgamma(0.75 - 0.5 * grid)
        for k in range(grid.size - 1):
            if values[k] == 0.0:
                roots.append(float(grid[k]))
            elif values[k] * values[k + 1] < 0.0:
                roots.append(brentq(contact_condition, grid[k], grid[k + 1], args=(g,), xtol=1e-13, rtol=1e-14))
        lo = float(grid[-1])
    return roots[:count]
