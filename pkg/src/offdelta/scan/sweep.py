"""
Parameter sweeps with level continuation.

A sweep runs in two passes. The sequential seeding pass walks the axis and,
for every sample, brackets each level inside a window of +/- SEED_WINDOW grid
steps around its value at the previous sample (falling back to a full scan
when a window does not hold exactly one root or a dark level is present). The
refinement pass bisects all brackets concurrently. Results come back in
sample order, so they do not depend on scheduling.
"""
import asyncio
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

import offdelta
from offdelta.hardwall.levels import (
    WallSide,
    classify_regime,
    inside_levels,
    merged_spectrum,
    outside_levels,
)
from offdelta.oracle.contact import contact_reference
from offdelta.relative.model import EnergyLevel, LevelKind, ModelParams, Parity
from offdelta.relative.spectrum import Bracket, SectorScanner, label_levels, solve_levels_widening
from offdelta.relative.wavefunction import build_wavefunction, width
from offdelta.utils.config import DEFAULT_QUADRATURE, DEFAULT_SOLVER, SEED_WINDOW, QuadratureConfig, SolverConfig
from offdelta.utils.errors import DomainError, OffdeltaError, SweepError

logger = logging.getLogger(__name__)

LevelId = Tuple[int, Optional[Parity]]
DEFAULT_WIDTH_IDS: List[LevelId] = [(0, Parity.EVEN), (1, Parity.ODD), (2, Parity.EVEN)]


@dataclass
class ScanResult:
    """
    Energies tabulated along one parameter axis.

    Attributes:
        axis_name (str): "g" or "c".
        axis_values (np.ndarray): Ascending samples.
        levels (np.ndarray): Energies, shape (samples, levels).
        level_ids (List[LevelId]): (n, parity) per column; for g = infinity
            sweeps the rank of the level and None.
        kinds (np.ndarray): Kind string per entry ("regular", "dark", "inside", "outside").
        metadata (Dict): Fixed parameters, tolerances and version.
        regimes (Optional[List[str]]): Regime label per sample, g = infinity only.
        triples (Optional[np.ndarray]): Triple-degeneracy flags, g = infinity only.
    """
    axis_name: str
    axis_values: np.ndarray
    levels: np.ndarray
    level_ids: List[LevelId]
    kinds: np.ndarray
    metadata: Dict = field(default_factory=dict)
    regimes: Optional[List[str]] = None
    triples: Optional[np.ndarray] = None

    def column(self, n: int) -> np.ndarray:
        """Energies of the level labelled n across the axis."""
        for k, (label, _) in enumerate(self.level_ids):
            if label == n:
                return self.levels[:, k]
        raise KeyError(n)


@dataclass
class WidthTable:
    """
    <x^2> per displacement and level.

    Attributes:
        c_values (np.ndarray): Ascending displacements.
        level_ids (List[LevelId]): Columns.
        widths (np.ndarray): Shape (samples, levels).
        metadata (Dict): Fixed parameters.
    """
    c_values: np.ndarray
    level_ids: List[LevelId]
    widths: np.ndarray
    metadata: Dict = field(default_factory=dict)

    def column(self, n: int) -> np.ndarray:
        for k, (label, _) in enumerate(self.level_ids):
            if label == n:
                return self.widths[:, k]
        raise KeyError(n)


@dataclass(frozen=True)
class Crossing:
    """
    An exact crossing of an inside level with an outside pair at g = infinity.

    Attributes:
        c (float): Displacement.
        epsilon (float): Common energy.
        parity (Parity): Sector of the inside level.
        inside_index (int): Index of the inside level within its sector.
        outside_index (int): nu of the outside pair.
    """
    c: float
    epsilon: float
    parity: Parity
    inside_index: int
    outside_index: int


@dataclass
class _Seed:
    # Per sector: solved levels, or brackets waiting for refinement
    levels: Dict[Parity, List[EnergyLevel]] = field(default_factory=dict)
    brackets: Dict[Parity, List[Bracket]] = field(default_factory=dict)
    scanners: Dict[Parity, SectorScanner] = field(default_factory=dict)


def _check_axis(samples: Sequence[float], positive: bool = False) -> np.ndarray:
    values = np.asarray(samples, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise DomainError("a sweep needs at least two samples")
    if np.any(np.diff(values) <= 0.0):
        raise DomainError("sweep samples must be strictly ascending")
    if positive and values[0] <= 0.0:
        raise DomainError("displacement samples must be positive")
    return values


def _sector_counts(n_levels: int) -> Dict[Parity, int]:
    if n_levels < 1 or n_levels > 40:
        raise DomainError(f"n_levels must lie in [1, 40], got {n_levels}")
    return {Parity.EVEN: (n_levels + 1) // 2, Parity.ODD: n_levels // 2}


def _seed_sector(
    scanner: SectorScanner,
    previous: Sequence[float],
) -> Optional[List[Bracket]]:
    window = SEED_WINDOW * scanner.config.q_step
    brackets = []
    for Q in previous:
        found = scanner.brackets_between(Q - window, Q + window)
        if len(found) != 1:
            return None
        if brackets and found[0].lo < brackets[-1].hi:
            return None
        brackets.append(found[0])
    return brackets


def _seeding_pass(
    samples: np.ndarray,
    make_params: Callable[[float], ModelParams],
    counts: Dict[Parity, int],
    config: SolverConfig,
) -> List[_Seed]:
    # node counts are checked on the first sample only
    quiet = replace(config, validate_nodes=False)
    seeds = []
    previous: Dict[Parity, List[float]] = {}
    for index, value in enumerate(samples):
        params = make_params(float(value))
        seed = _Seed()
        try:
            for parity, count in counts.items():
                if count == 0:
                    continue
                # follow the previous sample's roots; a dark sample always rescans
                brackets = None
                if index > 0 and params.g != 0.0 and params.c > 0.0:
                    scanner = SectorScanner(params, parity, quiet)
                    if not scanner.dark:
                        brackets = _seed_sector(scanner, previous[parity])
                # first sample, dark sample or failed continuation: full scan
                if brackets is None:
                    if index > 0:
                        logger.debug("%s sample %d: full scan", parity.value, index)
                    levels = solve_levels_widening(params, parity, count, config if index == 0 else quiet)
                    seed.levels[parity] = levels
                    previous[parity] = [level.Q for level in levels]
                else:
                    seed.brackets[parity] = brackets
                    seed.scanners[parity] = scanner
                    previous[parity] = [0.5 * (b.lo + b.hi) for b in brackets]
        except OffdeltaError as exc:
            raise SweepError(index, float(value), exc) from exc
        seeds.append(seed)
    return seeds


def _refine(seed: _Seed, parity: Parity, count: int) -> List[EnergyLevel]:
    if parity in seed.levels:
        return seed.levels[parity]
    scanner = seed.scanners[parity]
    entries = []
    for bracket in seed.brackets[parity]:
        root = scanner.refine(bracket)
        if root is None:
            return solve_levels_widening(scanner.params, parity, count, scanner.config)
        entries.append((root, scanner.level_error(bracket), LevelKind.REGULAR))
    return label_levels(parity, entries)


async def _refine_sample(index: int, value: float, seed: _Seed, counts: Dict[Parity, int]) -> List[EnergyLevel]:
    try:
        sectors = await asyncio.gather(
            *[asyncio.to_thread(_refine, seed, parity, count) for parity, count in counts.items() if count]
        )
    except OffdeltaError as exc:
        raise SweepError(index, value, exc) from exc
    return sorted((level for sector in sectors for level in sector), key=lambda level: level.n)


async def _sweep_async(
    axis_name: str,
    samples: np.ndarray,
    make_params: Callable[[float], ModelParams],
    n_levels: int,
    config: SolverConfig,
) -> ScanResult:
    counts = _sector_counts(n_levels)
    seeds = _seeding_pass(samples, make_params, counts, config)
    rows = await asyncio.gather(
        *[_refine_sample(k, float(v), seed, counts) for k, (v, seed) in enumerate(zip(samples, seeds))]
    )
    level_ids = [(n, Parity.of(n)) for n in range(n_levels)]
    levels = np.array([[level.epsilon for level in row] for row in rows])
    kinds = np.array([[level.kind.value for level in row] for row in rows], dtype=object)
    metadata = {
        "solver_version": offdelta.__version__,
        "q_step": config.q_step,
        "root_tol": config.root_tol,
        "dark_tol": config.dark_tol,
        "max_est_error": float(max(level.est_error for row in rows for level in row)),
    }
    return ScanResult(axis_name, samples, levels, level_ids, kinds, metadata)


def sweep_g(
    c: float,
    g_samples: Sequence[float],
    n_levels: int,
    config: SolverConfig = DEFAULT_SOLVER,
) -> ScanResult:
    """
    Levels n = 0 .. n_levels - 1 against the coupling at fixed displacement.

    Args:
        c (float): Displacement.
        g_samples (Sequence[float]): Ascending couplings, at least two.
        n_levels (int): Number of levels.
        config (SolverConfig): Solver settings.

    Returns:
        ScanResult: Axis "g".

    Raises:
        SweepError: Wrapping the solver error of the failing sample.
    """
    samples = _check_axis(g_samples)
    result = asyncio.run(_sweep_async("g", samples, lambda g: ModelParams(g, c), n_levels, config))
    result.metadata["c"] = c
    return result


def sweep_c(
    g: float,
    c_samples: Sequence[float],
    n_levels: int,
    config: SolverConfig = DEFAULT_SOLVER,
) -> ScanResult:
    """
    Levels n = 0 .. n_levels - 1 against the displacement at fixed coupling.

    The metadata carries the two limits of every curve: the contact problem
    (bosons fermionize towards 2 floor(n/2) + 3/2 at strong coupling, odd
    levels stay at n + 1/2) and the non-interacting spectrum at large c.

    Args:
        g (float): Coupling.
        c_samples (Sequence[float]): Ascending positive displacements.
        n_levels (int): Number of levels.
        config (SolverConfig): Solver settings.

    Returns:
        ScanResult: Axis "c".
    """
    samples = _check_axis(c_samples, positive=True)
    result = asyncio.run(_sweep_async("c", samples, lambda c: ModelParams(g, c), n_levels, config))
    even = contact_reference(g, (n_levels + 1) // 2)
    result.metadata.update(
        g=g,
        contact_limit=[even[n // 2] if n % 2 == 0 else n + 0.5 for n in range(n_levels)],
        fermionic_limit=[2 * (n // 2) + 1.5 for n in range(n_levels)],
        noninteracting_limit=[n + 0.5 for n in range(n_levels)],
    )
    return result


async def _widths_async(g: float, samples: np.ndarray, scan: ScanResult, level_ids: List[LevelId], quadrature: QuadratureConfig) -> np.ndarray:
    def one(k: int, c: float, n: int) -> float:
        parity = Parity.of(n)
        column = [i for i, (label, _) in enumerate(scan.level_ids) if label == n][0]
        kind = LevelKind(scan.kinds[k, column])
        level = EnergyLevel(n, parity, float(scan.levels[k, column]), kind)
        return width(build_wavefunction(level, ModelParams(g, c), quadrature), quadrature)

    async def row(k: int, c: float) -> List[float]:
        try:
            return await asyncio.gather(*[asyncio.to_thread(one, k, c, n) for n, _ in level_ids])
        except OffdeltaError as exc:
            raise SweepError(k, c, exc) from exc

    rows = await asyncio.gather(*[row(k, float(c)) for k, c in enumerate(samples)])
    return np.array(rows)


def sweep_widths(
    g: float,
    c_samples: Sequence[float],
    level_ids: Sequence[LevelId] = tuple(DEFAULT_WIDTH_IDS),
    config: SolverConfig = DEFAULT_SOLVER,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> WidthTable:
    """
    Spatial extent <x^2> of selected levels against the displacement.

    Args:
        g (float): Coupling.
        c_samples (Sequence[float]): Ascending positive displacements.
        level_ids (Sequence[LevelId]): (n, parity) pairs.
        config (SolverConfig): Solver settings.
        quadrature (QuadratureConfig): Quadrature settings.

    Returns:
        WidthTable: Widths per sample and level.
    """
    ids = list(level_ids)
    for n, parity in ids:
        if parity is not Parity.of(n):
            raise DomainError(f"level n={n} has parity {Parity.of(n).value}")
    samples = _check_axis(c_samples, positive=True)
    scan = sweep_c(g, samples, max(n for n, _ in ids) + 1, config)
    widths = asyncio.run(_widths_async(g, samples, scan, ids, quadrature))
    return WidthTable(samples, ids, widths, {"g": g, "solver_version": offdelta.__version__})


async def _infinite_async(samples: np.ndarray, n_levels: int, config: SolverConfig):
    async def one(k: int, c: float):
        try:
            spectrum, regime = await asyncio.gather(
                asyncio.to_thread(merged_spectrum, c, n_levels, config),
                asyncio.to_thread(classify_regime, c, config),
            )
        except OffdeltaError as exc:
            raise SweepError(k, c, exc) from exc
        return spectrum, regime

    return await asyncio.gather(*[one(k, float(c)) for k, c in enumerate(samples)])


def sweep_infinite(
    c_samples: Sequence[float],
    n_levels: int,
    config: SolverConfig = DEFAULT_SOLVER,
) -> ScanResult:
    """
    The merged g = infinity spectrum against the displacement.

    Columns are energy ranks; each entry carries its kind ("inside" or
    "outside"), a triple-degeneracy flag, and each sample its regime label.

    Args:
        c_samples (Sequence[float]): Ascending positive displacements.
        n_levels (int): Number of distinct levels per sample.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        ScanResult: Axis "c".
    """
    samples = _check_axis(c_samples, positive=True)
    rows = asyncio.run(_infinite_async(samples, n_levels, config))
    levels = np.array([[level.epsilon for level in spectrum] for spectrum, _ in rows])
    kinds = np.array(
        [
            [
                level.kind.value if level.kind is WallSide.OUTSIDE else f"{level.kind.value}-{level.parity.value}"
                for level in spectrum
            ]
            for spectrum, _ in rows
        ],
        dtype=object,
    )
    triples = np.array([[level.triple for level in spectrum] for spectrum, _ in rows])
    regimes = [regime.value for _, regime in rows]
    metadata = {"g": math.inf, "solver_version": offdelta.__version__, "degeneracy_tol": config.degeneracy_tol}
    return ScanResult("c", samples, levels, [(k, None) for k in range(n_levels)], kinds, metadata, regimes, triples)


def _inside_energy(c: float, parity: Parity, index: int, config: SolverConfig) -> float:
    levels = inside_levels(c, parity, index + 1, config)
    return levels[index].epsilon if len(levels) > index else math.nan


def infinite_crossings(
    c_samples: Sequence[float],
    n_levels: int,
    tol: float = 1e-10,
    config: SolverConfig = DEFAULT_SOLVER,
) -> List[Crossing]:
    """
    Crossings of inside levels with outside pairs at g = infinity.

    Sign changes of epsilon_in - epsilon_out between neighbouring samples are
    refined with Brent's method in c.

    Args:
        c_samples (Sequence[float]): Ascending positive displacements.
        n_levels (int): Levels per family (inside of each parity, outside).
        tol (float): Tolerance on c.
        config (SolverConfig): Scan range and tolerances.

    Returns:
        List[Crossing]: Crossings ordered by c, then energy.
    """
    samples = _check_axis(c_samples, positive=True)
    inside = {
        parity: np.array([[_inside_energy(float(c), parity, k, config) for k in range(n_levels)] for c in samples])
        for parity in Parity
    }
    outside = np.array([[o.epsilon for o in outside_levels(float(c), n_levels, config)] for c in samples])

    def gap(c: float, parity: Parity, k: int, nu: int) -> float:
        return _inside_energy(c, parity, k, config) - outside_levels(c, nu + 1, config)[nu].epsilon

    crossings = []
    for parity in Parity:
        for k in range(n_levels):
            for nu in range(outside.shape[1]):
                diff = inside[parity][:, k] - outside[:, nu]
                for j in range(samples.size - 1):
                    lo, hi = diff[j], diff[j + 1]
                    if not (math.isfinite(lo) and math.isfinite(hi)) or lo * hi > 0.0:
                        continue
                    if lo == 0.0:
                        c_star = float(samples[j])
                    elif hi == 0.0:
                        continue
                    else:
                        c_star = brentq(gap, samples[j], samples[j + 1], args=(parity, k, nu), xtol=tol)
                    crossings.append(Crossing(c_star, _inside_energy(c_star, parity, k, config), parity, k, nu))
    crossings.sort(key=lambda x: (x.c, x.epsilon))
    return crossings
