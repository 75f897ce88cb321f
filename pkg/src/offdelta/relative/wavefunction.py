"""
Piecewise eigenfunctions of the relative problem and their observables.

Region I (x < -c):    beta D_Q(-x)
Region II (|x| < c):  beta D_Q(c) [D_Q(x) + s D_Q(-x)] / [D_Q(-c) + s D_Q(c)]
Region III (x > c):   s beta D_Q(x)
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from offdelta.relative.model import EnergyLevel, ModelParams
from offdelta.specfun.parabolic import ARG_LIMIT, parabolic_d, parabolic_d_prime
from offdelta.utils.config import DEFAULT_QUADRATURE, QuadratureConfig
from offdelta.utils.errors import NormalizationError
from offdelta.utils.quadrature import composite_simpson

logger = logging.getLogger(__name__)

GRAZING = 1e-9
_PEAK_SAMPLES = 401


@dataclass(frozen=True)
class PiecewiseWavefunction:
    """
    A normalized eigenfunction.

    Attributes:
        level (EnergyLevel): The level it belongs to.
        c (float): Displacement.
        g (float): Coupling.
        beta (float): Amplitude of region I, > 0.
        inner (float): D_Q(c) / [D_Q(-c) + s D_Q(c)], the region II factor.
        uniform (bool): True when phi = beta D_n(-x) on the whole line
            (dark and non-interacting levels).
        half_length (float): L, the integration domain is [-L, L].
    """
    level: EnergyLevel
    c: float
    g: float
    beta: float
    inner: float
    uniform: bool
    half_length: float

    @property
    def Q(self) -> float:
        return self.level.Q

    @property
    def sign(self) -> int:
        return self.level.parity.sign


def _shape(Q: float, c: float, sign: int, inner: float, uniform: bool) -> Callable[[float], float]:
    def phi(x: float) -> float:
        if abs(x) > ARG_LIMIT:
            return 0.0
        if uniform or x <= -c:
            return parabolic_d(Q, -x)
        if x >= c:
            return sign * parabolic_d(Q, x)
        return inner * (parabolic_d(Q, x) + sign * parabolic_d(Q, -x))
    return phi


def _inner_factor(level: EnergyLevel, c: float) -> float:
    a = parabolic_d(level.Q, c)
    den = parabolic_d(level.Q, -c) + level.parity.sign * a
    if den == 0.0:
        raise NormalizationError(f"level at epsilon={level.epsilon:.10g} sits on a pole")
    return a / den


def _breakpoints(c: float, half_length: float):
    return [-half_length, -c, 0.0, c, half_length]


def build_wavefunction(
    level: EnergyLevel,
    params: ModelParams,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> PiecewiseWavefunction:
    """
    Normalizes the piecewise solution of a solved level.

    Dark and non-interacting levels are the oscillator states phi0_n with
    closed-form normalization; everything else is normalized by composite
    adaptive Simpson over [-L, L], L = c + tail, split at -c, 0 and c.

    Args:
        level (EnergyLevel): A level solved for ``params``.
        params (ModelParams): Coupling and displacement.
        config (QuadratureConfig): Quadrature settings.

    Returns:
        PiecewiseWavefunction: Unit-norm wavefunction with beta > 0.

    Raises:
        NormalizationError: If the quadrature does not converge.
    """
    c = params.c
    half_length = c + config.tail
    if level.is_dark or params.g == 0.0:
        beta = 1.0 / math.sqrt(math.factorial(level.n) * math.sqrt(2.0 * math.pi))
        return PiecewiseWavefunction(level, c, params.g, beta, 0.0, True, half_length)

    inner = 0.0 if c == 0.0 else _inner_factor(level, c)
    phi = _shape(level.Q, c, level.parity.sign, inner, False)
    grid = np.linspace(-half_length, half_length, _PEAK_SAMPLES)
    peak = max(phi(x) ** 2 for x in grid)
    norm, err, converged = composite_simpson(
        lambda x: phi(x) ** 2,
        _breakpoints(c, half_length),
        config.panel_tol * max(peak, 1e-300),
        config.max_depth,
    )
    if not converged or not norm > 0.0:
        raise NormalizationError(
            f"norm of level n={level.n} did not converge (value={norm:g}, error={err:g})"
        )
    logger.debug("n=%d norm=%.12g err=%.3g", level.n, norm, err)
    return PiecewiseWavefunction(level, c, params.g, 1.0 / math.sqrt(norm), inner, False, half_length)


def evaluate_wavefunction(psi: PiecewiseWavefunction, x: float) -> float:
    """
    phi(x) with region dispatch; x = +/-c gives the common one-sided limit.
    """
    return psi.beta * _shape(psi.Q, psi.c, psi.sign, psi.inner, psi.uniform)(x)


def _moment(psi: PiecewiseWavefunction, weight: Callable[[float], float], lo: float, hi: float, config: QuadratureConfig) -> float:
    phi = _shape(psi.Q, psi.c, psi.sign, psi.inner, psi.uniform)
    cuts = [p for p in _breakpoints(psi.c, psi.half_length) if lo < p < hi]
    value, _, converged = composite_simpson(
        lambda x: weight(x) * phi(x) ** 2,
        [lo] + cuts + [hi],
        config.panel_tol,
        config.max_depth,
    )
    if not converged:
        logger.debug("moment quadrature hit max depth for n=%d", psi.level.n)
    return psi.beta ** 2 * value


def width(psi: PiecewiseWavefunction, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    Second moment <x^2> of a normalized wavefunction.

    Args:
        psi (PiecewiseWavefunction): Normalized wavefunction.
        config (QuadratureConfig): Quadrature settings.

    Returns:
        float: <x^2>, equal to 2n + 1 at g = 0.
    """
    return _moment(psi, lambda x: x * x, -psi.half_length, psi.half_length, config)


def mass_inside(psi: PiecewiseWavefunction, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Probability of finding the particles closer than 2c, i.e. |x| < c."""
    if psi.c == 0.0:
        return 0.0
    return _moment(psi, lambda x: 1.0, -psi.c, psi.c, config)


def _sign_changes(values, threshold: float) -> int:
    count = 0
    last = 0.0
    for v in values:
        if abs(v) < threshold:
            continue
        if last != 0.0 and math.copysign(1.0, v) != math.copysign(1.0, last):
            count += 1
        last = v
    return count


def _node_grid(c: float, half_length: float) -> np.ndarray:
    coarse = np.arange(-half_length, half_length + 0.005, 0.01)
    if c <= 0.0 or c / 20.0 >= 0.01:
        return coarse
    # step c/20 across the deltas, 0.01 elsewhere
    reach = c + 0.01
    fine = np.arange(-reach, reach + c / 40.0, c / 20.0)
    return np.union1d(coarse[np.abs(coarse) > reach], fine)


def node_count(psi: PiecewiseWavefunction) -> int:
    """
    Strict sign changes of phi, |phi| < 1e-9 ignored.

    The grid step is min(0.01, c/20) within 0.01 of the deltas and 0.01
    elsewhere.
    """
    values = [evaluate_wavefunction(psi, x) for x in _node_grid(psi.c, psi.half_length)]
    return _sign_changes(values, GRAZING)


def raw_node_count(level: EnergyLevel, params: ModelParams, tail: float = DEFAULT_QUADRATURE.tail) -> int:
    """
    Node count of the unnormalized solution, grazing threshold relative to its peak.
    """
    c = params.c
    inner = 0.0 if c == 0.0 else _inner_factor(level, c)
    phi = _shape(level.Q, c, level.parity.sign, inner, False)
    values = [phi(x) for x in _node_grid(c, c + tail)]
    peak = max(abs(v) for v in values)
    return _sign_changes(values, GRAZING * peak)


def _slopes(psi: PiecewiseWavefunction, x: float) -> Tuple[float, float]:
    # (left, right) derivative at x
    Q, c, s, inner = psi.Q, psi.c, psi.sign, psi.inner

    def outer_left(t):
        return -parabolic_d_prime(Q, -t)

    def outer_right(t):
        return s * parabolic_d_prime(Q, t)

    def middle(t):
        return inner * (parabolic_d_prime(Q, t) - s * parabolic_d_prime(Q, -t))

    if psi.uniform:
        d = outer_left(x)
        return psi.beta * d, psi.beta * d
    if c == 0.0:
        return psi.beta * outer_left(x), psi.beta * outer_right(x)
    if x < 0.0:
        return psi.beta * outer_left(x), psi.beta * middle(x)
    return psi.beta * middle(x), psi.beta * outer_right(x)


def _values(psi: PiecewiseWavefunction, x: float) -> Tuple[float, float]:
    # (left, right) limits at x
    Q, c, s = psi.Q, psi.c, psi.sign
    if psi.uniform:
        v = psi.beta * parabolic_d(Q, -x)
        return v, v
    if c == 0.0:
        return psi.beta * parabolic_d(Q, -x), psi.beta * s * parabolic_d(Q, x)
    inner = psi.beta * psi.inner * (parabolic_d(Q, x) + s * parabolic_d(Q, -x))
    if x < 0.0:
        return psi.beta * parabolic_d(Q, -x), inner
    return inner, psi.beta * s * parabolic_d(Q, x)


def boundary_residuals(psi: PiecewiseWavefunction, params: ModelParams) -> Tuple[float, float, float, float]:
    """
    Matching residuals at the deltas from analytic derivatives.

    Continuity |phi(left) - phi(right)| and the jump condition
    |phi'(right) - phi'(left) - g phi| at x = -c and x = +c. At c = 0 the two
    deltas act as one of strength 2g and both pairs coincide.

    Args:
        psi (PiecewiseWavefunction): Normalized wavefunction.
        params (ModelParams): Coupling and displacement.

    Returns:
        Tuple[float, float, float, float]: (cont_minus, cont_plus, jump_minus, jump_plus).
    """
    strength = 2.0 * params.g if params.c == 0.0 else params.g
    residuals = []
    for x in (-params.c, params.c):
        left, right = _values(psi, x)
        d_left, d_right = _slopes(psi, x)
        value = 0.5 * (left + right)
        residuals.append((abs(left - right), abs(d_right - d_left - strength * value)))
    (cont_minus, jump_minus), (cont_plus, jump_plus) = residuals
    return cont_minus, cont_plus, jump_minus, jump_plus
