"""
Finite-g spectrum of H = -d^2/dx^2 + x^2/4 + g [delta(x + c) + delta(x - c)].

With a = D_Q(c), b = D_Q(-c), a1 = D_{Q+1}(c), b1 = D_{Q+1}(-c) and s = (-1)^n,
the eigenvalues epsilon = Q + 1/2 are the roots of

    F(Q) = (a b1 + b a1) / (b + s a) + g a.

F has poles on the zeros of b + s a (hard-wall inside levels) and is finite
on the zeros of a (hard-wall outside levels). At integer Q of the other
parity b + s a vanishes identically in c together with the numerator; F is
continuous there. Between two consecutive zeros of a (b + s a) the root
condition is monotone in Q, so splitting every scan cell at those zeros
leaves at most one root per piece.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from offdelta.relative.model import EnergyLevel, LevelKind, ModelParams, Parity
from offdelta.relative.wavefunction import raw_node_count
from offdelta.specfun.hermite import MAX_DEGREE, hermite_roots
from offdelta.specfun.parabolic import ORDER_LIMIT, parabolic_d
from offdelta.utils.config import DEFAULT_SOLVER, SolverConfig
from offdelta.utils.errors import DisplacementZeroError, LabelingError, RangeExhaustedError
from offdelta.utils.roots import bisect, scan_roots

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
# Breakpoints of the scan are located to this accuracy
_BREAKPOINT_TOL = 1e-14
# Half-width of the gap left around a pole
_POLE_GAP = 1e-12
# Both D_Q(c) and D_Q(-c) below this fraction of D_{Q+1}: the 0/0 dark case
_VANISHING = 1e-12
_REMOVABLE_STEP = 1e-6
# b + s a vanishes identically at integer orders of the other parity
_TRIVIAL_WINDOW = 1e-9
# Roots this close to such an order are not poles
_TRIVIAL_CLEARANCE = 1e-6
# Scanned roots this close to a dark order belong to the inserted dark level
_DARK_MERGE = 1e-6


def _terms(Q: float, c: float) -> Tuple[float, float, float, float]:
    return (
        parabolic_d(Q, c),
        parabolic_d(Q, -c),
        parabolic_d(Q + 1.0, c),
        parabolic_d(Q + 1.0, -c),
    )


def _vanishes(a: float, b: float, a1: float, b1: float) -> bool:
    return abs(a) + abs(b) <= _VANISHING * (abs(a1) + abs(b1))


def _trivial_order(Q: float, parity: Parity, window: float = _TRIVIAL_WINDOW) -> bool:
    m = round(Q)
    return m >= 0 and abs(Q - m) <= window and Parity.of(int(m)) is not parity


def _assemble(a, b, a1, b1, g, sign, pole_tol) -> Tuple[float, bool]:
    den = b + sign * a
    num = a * b1 + b * a1
    near_pole = abs(den) < pole_tol * (abs(a) + abs(b))
    if den == 0.0:
        return math.copysign(math.inf, num), True
    return num / den + g * a, near_pole


def spectral_function(
    Q: float,
    params: ModelParams,
    parity: Parity,
    config: SolverConfig = DEFAULT_SOLVER,
) -> Tuple[float, bool]:
    """
    Evaluates the finite-g spectral function F(Q).

    At a dark configuration (D_Q(c) = D_Q(-c) = 0, integer Q with c on a
    Hermite node) the expression is 0/0. The level is an eigenvalue of the
    sector with parity (-1)^Q, where 0.0 is returned; in the other sector the
    removable limit is returned.
    The same limit is returned at every integer Q of the other parity, where
    numerator and denominator vanish for all c.

    Args:
        Q (float): Order, epsilon - 1/2.
        params (ModelParams): Coupling and displacement, c > 0.
        parity (Parity): Sector.
        config (SolverConfig): Supplies the pole tolerance.

    Returns:
        Tuple[float, bool]: (F(Q), near_pole) where near_pole flags a
        vanishing denominator.

    Raises:
        DisplacementZeroError: If c = 0.
    """
    if params.c == 0.0:
        raise DisplacementZeroError("c = 0 merges the deltas; use solve_levels")
    if _trivial_order(Q, parity):
        return _removable_limit(Q, params, parity, config), False
    a, b, a1, b1 = _terms(Q, params.c)
    if _vanishes(a, b, a1, b1):
        if Parity.of(int(round(Q))) is parity:
            return 0.0, False
        return _removable_limit(Q, params, parity, config), False
    return _assemble(a, b, a1, b1, params.g, parity.sign, config.pole_tol)


def _removable_limit(Q: float, params: ModelParams, parity: Parity, config: SolverConfig) -> float:
    values = []
    for q in (Q - _REMOVABLE_STEP, Q + _REMOVABLE_STEP):
        values.append(_assemble(*_terms(q, params.c), params.g, parity.sign, config.pole_tol)[0])
    return 0.5 * (values[0] + values[1])


def dark_orders(c: float, parity: Parity, q_max: float, tol: float = DEFAULT_SOLVER.dark_tol) -> List[int]:
    """
    Quantum numbers n of the sector whose oscillator state has nodes at +/-c.

    Args:
        c (float): Displacement.
        parity (Parity): Sector.
        q_max (float): Largest order of interest.
        tol (float): Matching tolerance between c and sqrt(2) * (Hermite root).

    Returns:
        List[int]: Ascending dark quantum numbers.
    """
    found = []
    if c <= 0.0:
        return found
    top = min(int(math.floor(q_max)), MAX_DEGREE)
    # n = 0 has no nodes; the odd sector starts at n = 1, whose only node is the origin
    for n in range(parity.offset or 2, top + 1, 2):
        if any(abs(_SQRT2 * abs(y) - c) <= tol for y in hermite_roots(n)):
            found.append(n)
    return found


def lowest_order(params: ModelParams, config: SolverConfig = DEFAULT_SOLVER) -> float:
    """
    Order where a scan can start without missing a level.

    For g >= 0 every level satisfies epsilon >= 1/2. For g < 0 the ground state
    lies above that of a single delta of strength 2g in free space, -g^2.
    """
    if params.g >= 0.0:
        return -5.0 * config.q_step
    q_lo = -params.g * params.g - 1.0
    if q_lo < config.q_min:
        logger.warning(
            "g=%g may bind levels below Q_min=%g; scanning from Q_min", params.g, config.q_min
        )
        return config.q_min
    return q_lo


@dataclass(frozen=True)
class Bracket:
    """
    A sub-interval holding exactly one sign change of F.

    Attributes:
        lo (float): Left end.
        hi (float): Right end.
        f_lo (float): F(lo).
        f_hi (float): F(hi).
        clearance (float): Distance from the bracket to the nearest pole or
            zero of D_Q(c); small values mean an ill-conditioned root.
    """
    lo: float
    hi: float
    f_lo: float
    f_hi: float
    clearance: float


@dataclass(frozen=True)
class _Sample:
    Q: float
    a: float
    den: float
    value: float


class SectorScanner:
    """
    Pole-aware bracketing of F(Q) in one parity sector at fixed (g, c > 0).

    Args:
        params (ModelParams): Coupling and displacement, c > 0.
        parity (Parity): Sector.
        config (SolverConfig): Grid step, tolerances and dark matching.
    """

    def __init__(self, params: ModelParams, parity: Parity, config: SolverConfig = DEFAULT_SOLVER):
        if params.c == 0.0:
            raise DisplacementZeroError("c = 0 has no two-delta spectral function")
        self.params = params
        self.parity = parity
        self.config = config
        self.dark = dark_orders(params.c, parity, config.q_max, config.dark_tol)

    def value(self, Q: float) -> float:
        """F(Q), continued through the removable dark singularities."""
        if _trivial_order(Q, self.parity):
            return _removable_limit(Q, self.params, self.parity, self.config)
        a, b, a1, b1 = _terms(Q, self.params.c)
        if _vanishes(a, b, a1, b1):
            return _removable_limit(Q, self.params, self.parity, self.config)
        return _assemble(a, b, a1, b1, self.params.g, self.parity.sign, self.config.pole_tol)[0]

    def near_pole(self, Q: float) -> bool:
        if _trivial_order(Q, self.parity, _TRIVIAL_CLEARANCE):
            return False
        a, b, a1, b1 = _terms(Q, self.params.c)
        if _vanishes(a, b, a1, b1):
            return False
        return _assemble(a, b, a1, b1, self.params.g, self.parity.sign, self.config.pole_tol)[1]

    def _a(self, Q: float) -> float:
        return parabolic_d(Q, self.params.c)

    def _den(self, Q: float) -> float:
        return parabolic_d(Q, -self.params.c) + self.parity.sign * parabolic_d(Q, self.params.c)

    def _sample(self, Q: float) -> _Sample:
        return _Sample(Q, self._a(Q), self._den(Q), self.value(Q))

    def _is_dark(self, Q: float) -> bool:
        return any(abs(Q - n) <= _DARK_MERGE for n in self.dark)

    def _cell_brackets(self, left: _Sample, right: _Sample) -> List[Bracket]:
        # breakpoints: (position, is_pole)
        cuts = []
        if math.copysign(1.0, left.a) != math.copysign(1.0, right.a):
            cuts.append((bisect(self._a, left.Q, right.Q, _BREAKPOINT_TOL, left.a, right.a), False))
        if math.copysign(1.0, left.den) != math.copysign(1.0, right.den):
            position = bisect(self._den, left.Q, right.Q, _BREAKPOINT_TOL, left.den, right.den)
            # F is continuous through a zero of b + s a at an integer of the other parity
            if not _trivial_order(position, self.parity):
                cuts.append((position, True))
        cuts.sort()

        ends = [(left.Q, left.value)]
        for position, is_pole in cuts:
            if is_pole:
                lo = max(left.Q, position - _POLE_GAP)
                hi = min(right.Q, position + _POLE_GAP)
                ends.append((lo, self.value(lo)))
                ends.append((hi, self.value(hi)))
            else:
                ends.append((position, self.value(position)))
        ends.append((right.Q, right.value))

        pieces = []
        for k in range(len(ends) - 1):
            (lo, f_lo), (hi, f_hi) = ends[k], ends[k + 1]
            if hi <= lo:
                continue
            if cuts and any(is_pole for _, is_pole in cuts):
                # the piece straddling a pole is [Qp - gap, Qp + gap]
                if any(is_pole and lo <= p <= hi for p, is_pole in cuts):
                    continue
            pieces.append((lo, hi, f_lo, f_hi))

        brackets = []
        for lo, hi, f_lo, f_hi in pieces:
            if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
                continue
            # an exact zero is owned by the piece it closes
            if f_lo == 0.0:
                continue
            if f_hi == 0.0 or math.copysign(1.0, f_lo) != math.copysign(1.0, f_hi):
                clearance = min(
                    [abs(lo - p) for p, _ in cuts] + [abs(hi - p) for p, _ in cuts] + [math.inf]
                )
                brackets.append(Bracket(lo, hi, f_lo, f_hi, clearance))
        return brackets

    def brackets_between(self, lo: float, hi: float) -> List[Bracket]:
        """
        All root brackets of the sector on [lo, hi], dark orders excluded.

        Args:
            lo (float): Start of the window.
            hi (float): End of the window.

        Returns:
            List[Bracket]: Ascending, non-overlapping brackets.
        """
        step = self.config.q_step
        cells = max(1, int(math.ceil((hi - lo) / step - 1e-9)))
        found = []
        left = self._sample(lo)
        for k in range(1, cells + 1):
            right = self._sample(min(hi, lo + k * step))
            found.extend(self._cell_brackets(left, right))
            left = right
        return [b for b in found if not self._is_dark(0.5 * (b.lo + b.hi))]

    def refine(self, bracket: Bracket) -> Optional[float]:
        """
        Bisects a bracket to the configured tolerance.

        Returns:
            Optional[float]: The root, or None when the sign change is a pole
            or falls on a dark order.
        """
        root = bisect(self.value, bracket.lo, bracket.hi, self.config.root_tol, bracket.f_lo, bracket.f_hi)
        if self.near_pole(root):
            logger.debug("discarding sign change at Q=%.12g: pole", root)
            return None
        if self._is_dark(root):
            return None
        return root

    def level_error(self, bracket: Bracket) -> float:
        """Root tolerance, or the bracket width when the root hugs a pole."""
        if bracket.clearance > _DARK_MERGE:
            return self.config.root_tol
        return max(self.config.root_tol, bracket.hi - bracket.lo)

    def solve(self, count: int, q_lo: float) -> List[EnergyLevel]:
        """
        Lowest ``count`` levels of the sector, dark levels inserted exactly.

        Args:
            count (int): Number of levels.
            q_lo (float): Start of the scan.

        Returns:
            List[EnergyLevel]: Ascending levels labelled n = 2k + offset.

        Raises:
            RangeExhaustedError: If the scan reaches q_max first.
            LabelingError: If a dark level does not land on its own label.
        """
        step = self.config.q_step
        q_max = self.config.q_max
        roots = []  # (Q, est_error)
        left = self._sample(q_lo)
        k = 0
        while True:
            # dark levels below the scan front count towards the total
            below = len(roots) + sum(1 for n in self.dark if n <= left.Q)
            if below >= count:
                break
            q = q_lo + (k + 1) * step
            if q > q_max:
                raise RangeExhaustedError(below, count, q_max)
            right = self._sample(q)
            # dark orders are inserted below, never bisected
            for bracket in self._cell_brackets(left, right):
                if self._is_dark(0.5 * (bracket.lo + bracket.hi)):
                    continue
                root = self.refine(bracket)
                if root is not None:
                    roots.append((root, self.level_error(bracket)))
            left = right
            k += 1

        # merge by energy, then label by rank
        entries = [(q, err, LevelKind.REGULAR) for q, err in roots]
        entries += [(float(n), 0.0, LevelKind.DARK) for n in self.dark if n <= left.Q]
        entries.sort(key=lambda item: item[0])
        return label_levels(self.parity, entries[:count])


def label_levels(parity: Parity, entries: Sequence[Tuple[float, float, LevelKind]]) -> List[EnergyLevel]:
    """
    Assigns n = 2k + offset to the k-th root of a sector.

    Args:
        parity (Parity): Sector.
        entries (Sequence[Tuple[float, float, LevelKind]]): Ascending
            (Q, est_error, kind) triples.

    Returns:
        List[EnergyLevel]: Labelled levels.

    Raises:
        LabelingError: If a dark level lands on a label other than its order.
    """
    levels = []
    for k, (q, err, kind) in enumerate(entries):
        n = 2 * k + parity.offset
        if kind is LevelKind.DARK and int(round(q)) != n:
            raise LabelingError(f"dark level at Q={q:g} received label n={n}")
        levels.append(EnergyLevel(n, parity, q + 0.5, kind, err))
    return levels


def _contact_levels(params: ModelParams, parity: Parity, count: int, config: SolverConfig) -> List[EnergyLevel]:
    # Deltas merged at the origin: a single delta of strength 2g
    if parity is Parity.ODD:
        return [
            EnergyLevel(2 * k + 1, parity, 2 * k + 1.5, LevelKind.DARK)
            for k in range(count)
        ]
    g = params.g

    def matching(Q: float) -> float:
        return parabolic_d(Q + 1.0, 0.0) + g * parabolic_d(Q, 0.0)

    q_lo = lowest_order(params, config)
    q_hi = q_lo
    roots = []
    while len(roots) < count:
        if q_hi >= config.q_max:
            raise RangeExhaustedError(len(roots), count, config.q_max)
        start, q_hi = q_hi, min(config.q_max, q_hi + 4.0)
        roots += [r for r in scan_roots(matching, start, q_hi, config.q_step, config.root_tol)
                  if not roots or r > roots[-1] + config.root_tol]
    return label_levels(parity, [(q, config.root_tol, LevelKind.REGULAR) for q in roots[:count]])


def solve_levels(
    params: ModelParams,
    parity: Parity,
    count: int,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[EnergyLevel]:
    """
    Lowest ``count`` eigenvalues of one parity sector.

    Roots of F(Q) are bracketed on a grid of step ``config.q_step``, each cell
    split at the zeros of D_Q(c) and at the poles of F, and refined by
    bisection. Dark levels (c = sqrt(2) * Hermite root of H_n) are inserted at
    Q = n exactly. g = 0 and c = 0 have closed forms.

    Args:
        params (ModelParams): Coupling and displacement.
        parity (Parity): Sector.
        count (int): Number of levels, 1 <= count <= 40.
        config (SolverConfig): Range, step and tolerances.

    Returns:
        List[EnergyLevel]: Ascending levels with n = 2k (even) or 2k + 1 (odd).

    Raises:
        RangeExhaustedError: If fewer than ``count`` levels lie below q_max.
        LabelingError: If a node count contradicts a label.
    """
    if count < 1 or count > 40:
        raise ValueError(f"count must lie in [1, 40], got {count}")
    if params.g == 0.0:
        return [
            EnergyLevel(n, parity, n + 0.5, LevelKind.REGULAR)
            for n in range(parity.offset, parity.offset + 2 * count, 2)
        ]
    if params.c == 0.0:
        levels = _contact_levels(params, parity, count, config)
    else:
        scanner = SectorScanner(params, parity, config)
        levels = scanner.solve(count, lowest_order(params, config))
    if config.validate_nodes:
        validate_labels(levels, params)
    return levels


def validate_labels(levels: Sequence[EnergyLevel], params: ModelParams) -> None:
    """
    Checks every level's node count against its label.

    Raises:
        LabelingError: On the first mismatch.
    """
    for level in levels:
        if level.is_dark:
            continue
        nodes = raw_node_count(level, params)
        if nodes != level.n:
            raise LabelingError(
                f"level at epsilon={level.epsilon:.10g} labelled n={level.n} has {nodes} nodes"
            )


def solve_levels_widening(
    params: ModelParams,
    parity: Parity,
    count: int,
    config: SolverConfig = DEFAULT_SOLVER,
    attempts: int = 4,
) -> List[EnergyLevel]:
    """
    solve_levels, doubling q_max each time the range is exhausted.

    Args:
        params (ModelParams): Coupling and displacement.
        parity (Parity): Sector.
        count (int): Number of levels.
        config (SolverConfig): Starting configuration.
        attempts (int): Maximum number of solves.

    Returns:
        List[EnergyLevel]: As solve_levels.
    """
    retrying = Retrying(
        stop=stop_after_attempt(attempts),
        retry=retry_if_exception_type(RangeExhaustedError),
        reraise=True,
    )
    for attempt in retrying:
        with attempt:
            factor = 2 ** (attempt.retry_state.attempt_number - 1)
            q_max = min(config.q_max * factor, ORDER_LIMIT - 1.0)
            if factor > 1:
                logger.debug("widening scan to Q_max=%g", q_max)
            return solve_levels(params, parity, count, replace(config, q_max=q_max))


def solve_spectrum(
    params: ModelParams,
    count: int,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[EnergyLevel]:
    """
    Lowest ``count`` levels of both sectors, interleaved by energy.
    """
    even = solve_levels_widening(params, Parity.EVEN, (count + 1) // 2, config)
    odd = solve_levels_widening(params, Parity.ODD, max(1, count // 2), config)
    merged = sorted(even + odd, key=lambda level: level.n)
    return merged[:count]


def first_order_shift(n: int, params: ModelParams) -> float:
    """
    First-order perturbative shift g (|phi0_n(c)|^2 + |phi0_n(-c)|^2).

    Args:
        n (int): Oscillator quantum number.
        params (ModelParams): Coupling and displacement.

    Returns:
        float: Energy shift in units of hbar*omega.
    """
    norm = math.factorial(n) * math.sqrt(2.0 * math.pi)
    density = parabolic_d(float(n), params.c) ** 2 / norm
    return 2.0 * params.g * density
