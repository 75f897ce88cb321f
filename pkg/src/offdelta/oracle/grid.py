"""
Finite-difference diagonalization of the relative Hamiltonian.

-d^2/dx^2 is the three-point stencil on the interior points of [-L, L] with
Dirichlet ends, x^2/4 sits on the diagonal and each delta becomes a weight
g/h on the grid. The error is O(h^2) without deltas and O(h) from the delta
weights when a delta falls between grid points.
"""
import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from offdelta.relative.model import ModelParams
from offdelta.utils.errors import GridSpecError, OracleConvergenceError

logger = logging.getLogger(__name__)

MAX_STEP = 0.005
MIN_MARGIN = 8.0
MAX_LEVELS = 20


class DeltaModel(enum.Enum):
    NEAREST_POINT = "nearest"
    SPLIT_WEIGHT = "split"


@dataclass(frozen=True)
class GridSpec:
    """
    Attributes:
        L (float): Half-width of the domain [-L, L].
        h (float): Grid step, at most 0.005, with 2L/h an integer.
        delta_model (DeltaModel): How a delta is put on the grid.
    """
    L: float
    h: float
    delta_model: DeltaModel = DeltaModel.NEAREST_POINT

    def __post_init__(self):
        if not (self.h > 0.0 and self.h <= MAX_STEP):
            raise GridSpecError(f"grid step must lie in (0, {MAX_STEP}], got h={self.h!r}")
        cells = 2.0 * self.L / self.h
        if abs(cells - round(cells)) > 1e-9 * cells:
            raise GridSpecError(f"2L/h must be an integer, got {cells!r}")

    @property
    def cells(self) -> int:
        return int(round(2.0 * self.L / self.h))

    def points(self) -> np.ndarray:
        """Interior grid points."""
        return -self.L + self.h * np.arange(1, self.cells)

    def halved(self) -> "GridSpec":
        return replace(self, h=0.5 * self.h)

    def check_covers(self, c: float) -> None:
        if self.L < c + MIN_MARGIN:
            raise GridSpecError(f"L={self.L:g} must be at least c + {MIN_MARGIN:g} = {c + MIN_MARGIN:g}")


@dataclass(frozen=True)
class OracleResult:
    """
    Attributes:
        eigenvalues (List[float]): Ascending eigenvalues.
        second_moments (List[float]): <x^2> of each eigenvector.
        grid (GridSpec): Grid used.
    """
    eigenvalues: List[float]
    second_moments: List[float]
    grid: GridSpec


@dataclass(frozen=True)
class CertifiedResult:
    """
    Grid eigenvalues with an h-halving error bar.

    Attributes:
        eigenvalues (List[float]): Eigenvalues on the finer grid.
        errors (List[float]): Bound on the discretization error, 2|eps(h) - eps(h/2)|.
        extrapolated (List[float]): First-order Richardson values 2 eps(h/2) - eps(h).
        coarse (OracleResult): Result on the coarser grid.
        fine (OracleResult): Result on the finer grid.
    """
    eigenvalues: List[float]
    errors: List[float]
    extrapolated: List[float]
    coarse: OracleResult
    fine: OracleResult


def _add_delta(diagonal: np.ndarray, spec: GridSpec, position: float, weight: float) -> None:
    # index into the interior points, which start at -L + h
    t = (position + spec.L) / spec.h - 1.0
    if spec.delta_model is DeltaModel.NEAREST_POINT:
        diagonal[int(round(t))] += weight / spec.h
        return
    j = int(math.floor(t))
    frac = t - j
    diagonal[j] += (1.0 - frac) * weight / spec.h
    if frac > 0.0:
        diagonal[j + 1] += frac * weight / spec.h


def hamiltonian_bands(params: ModelParams, spec: GridSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonal and off-diagonal of the discretized Hamiltonian.

    Args:
        params (ModelParams): Coupling and displacement; c = 0 puts both deltas on the origin.
        spec (GridSpec): Grid.

    Returns:
        Tuple[np.ndarray, np.ndarray]: (diagonal, off-diagonal).
    """
    spec.check_covers(params.c)
    x = spec.points()
    diagonal = 2.0 / spec.h ** 2 + 0.25 * x * x
    off = np.full(x.size - 1, -1.0 / spec.h ** 2)
    if params.g != 0.0:
        for position in (-params.c, params.c):
            _add_delta(diagonal, spec, position, params.g)
    return diagonal, off


def grid_eigensolve(params: ModelParams, spec: GridSpec, k: int) -> OracleResult:
    """
    Lowest k eigenvalues of the discretized relative Hamiltonian.

    Args:
        params (ModelParams): Coupling and displacement.
        spec (GridSpec): Grid, with L >= c + 8.
        k (int): Number of levels, at most 20.

    Returns:
        OracleResult: Eigenvalues and second moments.

    Raises:
        OracleConvergenceError: If the tridiagonal eigensolver fails.
    """
    if k < 1 or k > MAX_LEVELS:
        raise ValueError(f"k must lie in [1, {MAX_LEVELS}], got {k}")
    diagonal, off = hamiltonian_bands(params, spec)
    try:
        values, vectors = eigh_tridiagonal(
            diagonal, off, select="i", select_range=(0, k - 1), lapack_driver="stebz"
        )
    except LinAlgError as exc:
        raise OracleConvergenceError(f"tridiagonal eigensolver failed: {exc}") from exc
    x2 = spec.points() ** 2
    moments = (x2[:, None] * vectors ** 2).sum(axis=0) / (vectors ** 2).sum(axis=0)
    logger.debug("grid L=%g h=%g: %s", spec.L, spec.h, np.array2string(values[:4], precision=8))
    return OracleResult([float(v) for v in values], [float(m) for m in moments], spec)


def certified_error(params: ModelParams, spec: GridSpec, k: int) -> CertifiedResult:
    """
    Solves on h and h/2 and bounds the discretization error of the finer grid.

    Args:
        params (ModelParams): Coupling and displacement.
        spec (GridSpec): Coarse grid.
        k (int): Number of levels.

    Returns:
        CertifiedResult: Fine-grid values with error bars and extrapolation.
    """
    coarse = grid_eigensolve(params, spec, k)
    fine = grid_eigensolve(params, spec.halved(), k)
    errors, extrapolated = [], []
    for e_h, e_h2 in zip(coarse.eigenvalues, fine.eigenvalues):
        errors.append(max(2.0 * abs(e_h - e_h2), 1e-12 * abs(e_h2)))
        extrapolated.append(2.0 * e_h2 - e_h)
    return CertifiedResult(fine.eigenvalues, errors, extrapolated, coarse, fine)
