"""
The g = +infinity problem: hard walls at x = -c and x = +c.

Region II (-c, c) carries the inside levels, roots of D_Q(-c) + s D_Q(c) = 0
in each parity sector. That combination vanishes identically at integer Q of
the other parity, so the roots are taken from the even or odd Kummer solution
at x = c instead. Regions I and III carry the outside levels, roots of
D_Q(c) = 0; each is shared by the even and odd combinations n = 2 nu and
n = 2 nu + 1.
"""
import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

from offdelta.relative.model import Parity
from offdelta.specfun.hermite import hermite_roots
from offdelta.specfun.parabolic import kummer_solution, parabolic_d
from offdelta.utils.config import DEFAULT_SOLVER, SolverConfig
from offdelta.utils.errors import DomainError
from offdelta.utils.roots import scan_roots

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
_CHUNK = 4.0
# Lowest inside order: Dirichlet walls only raise the oscillator ground state
_INSIDE_START = -0.5
# Lowest outside order: the half oscillator with a wall at the origin starts at Q = 1
_OUTSIDE_START = 0.5


class WallSide(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


class Regime(enum.Enum):
    EXCLUSION = "E"
    CROSSOVER = "C"
    TRUNCATION = "T"


@dataclass(frozen=True)
class HardwallLevel:
    """
    One g = +infinity eigenvalue.

    Attributes:
        kind (WallSide): INSIDE (region II) or OUTSIDE (regions I and III).
        parity (Optional[Parity]): Sector of an inside level; None for an
            outside pair, which holds one level of each parity.
        index (int): Sequential per parity for inside levels, nu for outside.
        epsilon (float): Energy.
        triple (bool): Coincides with a level of the other kind.
    """
    kind: WallSide
    parity: Optional[Parity]
    index: int
    epsilon: float
    triple: bool = False

    @property
    def multiplicity(self) -> int:
        return 2 if self.kind is WallSide.OUTSIDE else 1

    @property
    def partners(self) -> Tuple[int, ...]:
        """Quantum numbers n of the finite-g levels sharing this limit's pairing."""
        if self.kind is WallSide.OUTSIDE:
            return (2 * self.index, 2 * self.index + 1)
        return (2 * self.index + self.parity.offset,)


@dataclass(frozen=True)
class DarkPoint:
    """
    A displacement where the oscillator state n has nodes at +/-c.

    Attributes:
        n (int): Quantum number.
        c_star (float): sqrt(2) times a positive root of H_n.
        parity (Parity): Parity of n.
    """
    n: int
    c_star: float
    parity: Parity


def _lowest_roots(
    f: Callable[[float], float],
    start: float,
    count: int,
    config: SolverConfig,
    limit: Optional[float] = None,
) -> List[float]:
    top = config.q_max if limit is None else min(config.q_max, limit)
    roots = []
    lo = start
    while len(roots) < count and lo < top:
        hi = min(top, lo + _CHUNK)
        for r in scan_roots(f, lo, hi, config.q_step, config.root_tol):
            if not roots or r > roots[-1] + config.root_tol:
                roots.append(r)
        lo = hi
    return roots[:count]


def _inside_condition(c: float, parity: Parity) -> Callable[[float], float]:
    def f(Q: float) -> float:
        return kummer_solution(Q, c, odd=parity is Parity.ODD)
    return f


def _outside_condition(c: float) -> Callable[[float], float]:
    def f(Q: float) -> float:
        return parabolic_d(Q, c)
    return f


def _check_count(count: int, upper: int) -> None:
    if count < 1 or count > upper:
        raise ValueError(f"count must lie in [1, {upper}], got {count}")


def inside_levels(
    c: float,
    parity: Parity,
    count: int,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[HardwallLevel]:
    """
    Lowest inside levels of one parity: zeros at x = c of the solution with that parity.

    Args:
        c (float): Displacement, c > 0.
        parity (Parity): Sector.
        count (int): Number of levels, at most 40.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        List[HardwallLevel]: Ascending levels; fewer than ``count`` when the
        box is so narrow that they lie above q_max.
    """
    if not c > 0.0:
        raise DomainError(f"inside levels need c > 0, got c={c!r}")
    _check_count(count, 40)
    roots = _lowest_roots(_inside_condition(c, parity), _INSIDE_START, count, config)
    if len(roots) < count:
        logger.warning(
            "c=%g: %d of %d %s inside levels below Q_max=%g",
            c, len(roots), count, parity.value, config.q_max,
        )
    return [HardwallLevel(WallSide.INSIDE, parity, k, q + 0.5) for k, q in enumerate(roots)]


def outside_levels(c: float, count: int, config: SolverConfig = DEFAULT_SOLVER) -> List[HardwallLevel]:
    """
    Lowest outside levels: roots of D_Q(c) = 0, each an even/odd pair.

    Args:
        c (float): Displacement, c >= 0.
        count (int): Number of distinct levels, at most 40.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        List[HardwallLevel]: Ascending levels indexed by nu.
    """
    if not c >= 0.0:
        raise DomainError(f"outside levels need c >= 0, got c={c!r}")
    _check_count(count, 40)
    roots = _lowest_roots(_outside_condition(c), _OUTSIDE_START, count, config)
    if len(roots) < count:
        logger.warning("c=%g: %d of %d outside levels below Q_max=%g", c, len(roots), count, config.q_max)
    return [HardwallLevel(WallSide.OUTSIDE, None, nu, q + 0.5) for nu, q in enumerate(roots)]


def dark_points(n_max: int, c_max: float) -> List[DarkPoint]:
    """
    All dark displacements with n <= n_max and 0 < c* <= c_max.

    Args:
        n_max (int): Largest quantum number, at most 40.
        c_max (float): Largest displacement.

    Returns:
        List[DarkPoint]: Ascending in c*.
    """
    _check_count(n_max, 40)
    points = []
    for n in range(1, n_max + 1):
        for y in hermite_roots(n):
            c_star = _SQRT2 * y
            if 0.0 < c_star <= c_max:
                points.append(DarkPoint(n, c_star, Parity.of(n)))
    points.sort(key=lambda p: (p.c_star, p.n))
    return points


def merged_spectrum(c: float, count: int, config: SolverConfig = DEFAULT_SOLVER) -> List[HardwallLevel]:
    """
    Inside and outside levels sorted by energy, one entry per distinct level.

    Inside levels coinciding with an outside pair within ``degeneracy_tol``
    are flagged ``triple`` together with that pair.

    Args:
        c (float): Displacement, c > 0.
        count (int): Number of entries, at most 60.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        List[HardwallLevel]: Ascending entries.
    """
    _check_count(count, 60)
    per_kind = min(count, 40)
    inside = inside_levels(c, Parity.EVEN, per_kind, config) + inside_levels(c, Parity.ODD, per_kind, config)
    outside = outside_levels(c, per_kind, config)

    flagged_inside = []
    hit = set()
    for level in inside:
        match = [k for k, o in enumerate(outside) if abs(o.epsilon - level.epsilon) <= config.degeneracy_tol]
        if match:
            hit.update(match)
            level = replace(level, triple=True)
        flagged_inside.append(level)
    flagged_outside = [replace(o, triple=True) if k in hit else o for k, o in enumerate(outside)]

    merged = sorted(flagged_inside + flagged_outside, key=lambda level: level.epsilon)
    return merged[:count]


def limit_energies(
    c: float,
    count: int,
    parity: Optional[Parity] = None,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[float]:
    """
    Energies that the finite-g levels approach as g -> +infinity.

    Args:
        c (float): Displacement, c > 0.
        count (int): Number of energies.
        parity (Optional[Parity]): Restrict to one sector, whose k-th entry is
            the limit of its k-th level. Without it outside pairs count twice
            and the n-th entry is the limit of epsilon_n.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        List[float]: Ascending energies.
    """
    _check_count(count, 40)
    outside = [o.epsilon for o in outside_levels(c, count, config)]
    if parity is None:
        energies = [level.epsilon for p in Parity for level in inside_levels(c, p, count, config)]
        energies += outside + outside
    else:
        energies = [level.epsilon for level in inside_levels(c, parity, count, config)] + outside
    return sorted(energies)[:count]


def symmetrized_outside(level: HardwallLevel, c: float, parity: Parity, x: float) -> float:
    """
    Even or odd combination of the region I and region III solutions of an outside level.

    Unnormalized: D_Q(-x) for x < -c, (-1)^n D_Q(x) for x > c and exactly 0
    on the closed interval [-c, c].
    """
    if level.kind is not WallSide.OUTSIDE:
        raise DomainError("symmetrization applies to outside levels")
    Q = level.epsilon - 0.5
    if x < -c:
        return parabolic_d(Q, -x)
    if x > c:
        return parity.sign * parabolic_d(Q, x)
    return 0.0


def _inside_below(c: float, limit: float, config: SolverConfig) -> List[float]:
    energies = []
    for parity in Parity:
        roots = _lowest_roots(_inside_condition(c, parity), _INSIDE_START, 2, config, limit=limit - 0.5)
        energies += [q + 0.5 for q in roots]
    return sorted(energies)


def classify_regime(c: float, config: SolverConfig = DEFAULT_SOLVER) -> Regime:
    """
    Exclusion, crossover or truncation from the low g = infinity levels.

    Exclusion when no inside level lies below the second outside level,
    truncation when the two lowest inside levels both lie below the first
    outside level, crossover otherwise.

    Args:
        c (float): Displacement, c > 0.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        Regime: The regime label.
    """
    if not c > 0.0:
        raise DomainError(f"regimes need c > 0, got c={c!r}")
    outside = outside_levels(c, 2, config)
    if len(outside) < 2:
        # outside pairs pushed beyond range only when the walls are far out
        return Regime.TRUNCATION
    out0, out1 = outside[0].epsilon, outside[1].epsilon
    inside = _inside_below(c, out1, config)
    if not inside:
        return Regime.EXCLUSION
    if len(inside) >= 2 and inside[1] < out0:
        return Regime.TRUNCATION
    return Regime.CROSSOVER


def regime_boundaries(
    c_samples: Sequence[float],
    tol: float = 1e-3,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[Tuple[float, Regime, Regime]]:
    """
    Displacements where the regime label changes.

    Each change between neighbouring samples is refined by bisection in c.

    Args:
        c_samples (Sequence[float]): Ascending positive displacements.
        tol (float): Bisection tolerance in c.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        List[Tuple[float, Regime, Regime]]: (c_boundary, regime below, regime above).
    """
    samples = [float(c) for c in c_samples]
    labels = [classify_regime(c, config) for c in samples]
    boundaries = []
    for k in range(len(samples) - 1):
        lo, hi = samples[k], samples[k + 1]
        below, above = labels[k], labels[k + 1]
        if below is above:
            continue
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if classify_regime(mid, config) is below:
                lo = mid
            else:
                hi = mid
        boundaries.append((0.5 * (lo + hi), below, above))
    logger.debug("regime boundaries: %s", [(round(b, 6), x.value, y.value) for b, x, y in boundaries])
    return boundaries
