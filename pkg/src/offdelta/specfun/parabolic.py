"""
Weber parabolic cylinder function D_Q(x) for real order and argument.

D_Q solves y'' + (Q + 1/2 - x^2/4) y = 0 and decays as x -> +inf. Near the
origin it is assembled from the two Kummer series

    D_Q(x) = e^{-x^2/4} [ D_Q(0) M(-Q/2, 1/2, x^2/2) + D_Q'(0) x M((1-Q)/2, 3/2, x^2/2) ]

with D_Q(0) = sqrt(pi) 2^{Q/2} / Gamma((1-Q)/2) and
D_Q'(0) = -sqrt(pi) 2^{(Q+1)/2} / Gamma(-Q/2). Beyond the crossover radius the
large-|x| asymptotic expansions take over; for negative arguments the
connection formula adds the growing term sqrt(2 pi)/Gamma(-Q) e^{x^2/4} |x|^{-Q-1}.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import mpmath

from offdelta.specfun.gamma import cos_pi, rgamma
from offdelta.utils.errors import AccuracyLossError, DomainError

logger = logging.getLogger(__name__)

ARG_LIMIT = 60.0
ORDER_LIMIT = 200.0
ACCURACY_TOL = 1e-6
# Tolerance of the solver-facing evaluators before switching to mpmath
PRECISION_TOL = 1e-10
HIGH_PRECISION_DPS = 30

_EPS = 2.220446049250313e-16
_ROUNDING = 8.0 * _EPS
_MAX_TERMS = 2000
_LOG_MAX = 700.0
_SQRT_PI = math.sqrt(math.pi)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class EvalResult:
    """
    A function value with an upper bound on its truncation and rounding error.

    Attributes:
        value (float): The computed value.
        est_abs_error (float): Estimated absolute error, >= 0.
    """
    value: float
    est_abs_error: float


class _Neumaier:
    # compensated summation
    __slots__ = ("total", "compensation", "abs_total")

    def __init__(self):
        self.total = 0.0
        self.compensation = 0.0
        self.abs_total = 0.0

    def add(self, term: float) -> None:
        t = self.total + term
        if abs(self.total) >= abs(term):
            self.compensation += (self.total - t) + term
        else:
            self.compensation += (term - t) + self.total
        self.total = t
        self.abs_total += abs(term)

    @property
    def value(self) -> float:
        return self.total + self.compensation


def crossover_radius(Q: float) -> float:
    """Argument beyond which the asymptotic expansion replaces the Kummer series."""
    return max(6.0, 2.0 * math.sqrt(abs(Q) + 1.0))


def _kummer_m(a: float, b: float, z: float) -> Tuple[float, float, float]:
    # M(a, b, z) for z >= 0: (sum, sum of |terms|, tail bound)
    acc = _Neumaier()
    term = 1.0
    acc.add(term)
    for k in range(_MAX_TERMS):
        term *= (a + k) / (b + k) * z / (k + 1)
        if term == 0.0:
            return acc.value, acc.abs_total, 0.0
        acc.add(term)
        if k + 1 > z and k + 1 > -a and abs(term) <= _EPS * acc.abs_total:
            ratio = abs((a + k + 1) * z / ((b + k + 1) * (k + 2)))
            tail = abs(term) * ratio / (1.0 - ratio) if ratio < 1.0 else abs(term)
            return acc.value, acc.abs_total, tail
    return acc.value, acc.abs_total, abs(term)


def _series(Q: float, x: float) -> Tuple[float, float]:
    z = 0.5 * x * x
    d0 = _SQRT_PI * 2.0 ** (0.5 * Q) * rgamma(0.5 * (1.0 - Q))
    d1 = -_SQRT_PI * 2.0 ** (0.5 * (Q + 1.0)) * rgamma(-0.5 * Q)
    envelope = math.exp(-0.25 * x * x)

    value = 0.0
    error = 0.0
    if d0 != 0.0:
        s, s_abs, tail = _kummer_m(-0.5 * Q, 0.5, z)
        value += d0 * s
        error += abs(d0) * (_ROUNDING * s_abs + tail)
    if d1 != 0.0 and x != 0.0:
        s, s_abs, tail = _kummer_m(0.5 * (1.0 - Q), 1.5, z)
        value += d1 * x * s
        error += abs(d1 * x) * (_ROUNDING * s_abs + tail)
    return envelope * value, envelope * error


def _decaying_sum(Q: float, x: float) -> Tuple[float, float]:
    # sum_s (-1)^s (-Q)_{2s} / (s! (2x^2)^s), optimally truncated
    acc = _Neumaier()
    term = 1.0
    acc.add(term)
    omitted = 0.0
    two_x2 = 2.0 * x * x
    for s in range(_MAX_TERMS):
        nxt = -term * (2 * s - Q) * (2 * s + 1 - Q) / ((s + 1) * two_x2)
        if nxt == 0.0:
            break
        if abs(nxt) >= abs(term):
            omitted = abs(nxt)
            break
        acc.add(nxt)
        term = nxt
        if abs(term) <= _EPS * abs(acc.value):
            omitted = abs(term)
            break
    return acc.value, omitted + _ROUNDING * acc.abs_total


def _growing_sum(Q: float, y: float) -> Tuple[float, float]:
    # sum_s (Q+1)_{2s} / (s! (2y^2)^s), optimally truncated
    acc = _Neumaier()
    term = 1.0
    acc.add(term)
    omitted = 0.0
    two_y2 = 2.0 * y * y
    for s in range(_MAX_TERMS):
        nxt = term * (Q + 1 + 2 * s) * (Q + 2 + 2 * s) / ((s + 1) * two_y2)
        if nxt == 0.0:
            break
        if abs(nxt) >= abs(term):
            omitted = abs(nxt)
            break
        acc.add(nxt)
        term = nxt
        if abs(term) <= _EPS * abs(acc.value):
            omitted = abs(term)
            break
    return acc.value, omitted + _ROUNDING * acc.abs_total


def _asymptotic_positive(Q: float, x: float) -> Tuple[float, float]:
    s, err = _decaying_sum(Q, x)
    log_prefactor = -0.25 * x * x + Q * math.log(x)
    if log_prefactor < -745.0:
        return 0.0, 0.0
    prefactor = math.exp(log_prefactor)
    return prefactor * s, prefactor * err


def _asymptotic_negative(Q: float, y: float) -> Tuple[float, float]:
    # D_Q(-y) = cos(pi Q) D_Q(y) + sqrt(2 pi)/Gamma(-Q) e^{y^2/4} y^{-Q-1} (...)
    decaying, decaying_err = _asymptotic_positive(Q, y)
    value = cos_pi(Q) * decaying
    error = decaying_err
    weight = rgamma(-Q)
    if weight != 0.0:
        log_prefactor = 0.25 * y * y - (Q + 1.0) * math.log(y)
        if log_prefactor > _LOG_MAX:
            raise AccuracyLossError(
                f"D_{Q:g}({-y:g}) overflows double precision", math.inf, math.inf
            )
        s, err = _growing_sum(Q, y)
        prefactor = _SQRT_TWO_PI * weight * math.exp(log_prefactor)
        value += prefactor * s
        error += abs(prefactor) * err
    return value, error


def _check_domain(Q: float, x: float) -> None:
    if not (math.isfinite(Q) and abs(Q) <= ORDER_LIMIT):
        raise DomainError(f"order Q={Q!r} outside [-{ORDER_LIMIT:g}, {ORDER_LIMIT:g}]")
    if not (math.isfinite(x) and abs(x) <= ARG_LIMIT):
        raise DomainError(f"argument x={x!r} outside [-{ARG_LIMIT:g}, {ARG_LIMIT:g}]")


def pcf_D(Q: float, x: float, tol: float = ACCURACY_TOL) -> EvalResult:
    """
    Parabolic cylinder function D_Q(x) with an error estimate.

    Args:
        Q (float): Real order.
        x (float): Real argument, |x| <= 60.
        tol (float): Accepted error. For Q < 0, where D_Q is positive, the
            bound is relative to the value; otherwise it is absolute for
            values below one and relative above.

    Returns:
        EvalResult: Value and estimated absolute error.

    Raises:
        DomainError: If Q or x lie outside the supported range.
        AccuracyLossError: If the estimate exceeds the tolerance.
    """
    Q = float(Q)
    x = float(x)
    _check_domain(Q, x)
    if abs(x) <= crossover_radius(Q):
        value, error = _series(Q, x)
    elif x > 0.0:
        value, error = _asymptotic_positive(Q, x)
    else:
        value, error = _asymptotic_negative(Q, -x)

    scale = abs(value) if Q < 0.0 else max(1.0, abs(value))
    if not math.isfinite(value) or error > tol * scale:
        raise AccuracyLossError(
            f"D_{Q:g}({x:g}) error estimate {error:.3g} exceeds tolerance", value, error
        )
    return EvalResult(value, error)


def pcf_D_prime(Q: float, x: float, tol: float = ACCURACY_TOL) -> EvalResult:
    """
    Derivative dD_Q/dx = (x/2) D_Q(x) - D_{Q+1}(x).

    Args:
        Q (float): Real order.
        x (float): Real argument, |x| <= 60.
        tol (float): Tolerance forwarded to both pcf_D evaluations.

    Returns:
        EvalResult: Slope and its estimated absolute error.
    """
    d = pcf_D(Q, x, tol)
    d_next = pcf_D(Q + 1.0, x, tol)
    return EvalResult(
        0.5 * x * d.value - d_next.value,
        0.5 * abs(x) * d.est_abs_error + d_next.est_abs_error,
    )


def _high_precision(Q: float, x: float) -> float:
    with mpmath.workdps(HIGH_PRECISION_DPS):
        return float(mpmath.re(mpmath.pcfd(Q, x)))


@lru_cache(maxsize=1 << 16)
def parabolic_d(Q: float, x: float) -> float:
    """
    D_Q(x) for the solvers: double precision first, mpmath when that loses accuracy.

    Args:
        Q (float): Real order.
        x (float): Real argument.

    Returns:
        float: D_Q(x).
    """
    try:
        return pcf_D(Q, x, PRECISION_TOL).value
    except AccuracyLossError:
        logger.debug("D_%r(%r): switching to %d-digit arithmetic", Q, x, HIGH_PRECISION_DPS)
        return _high_precision(float(Q), float(x))


def parabolic_d_prime(Q: float, x: float) -> float:
    """Accuracy-safe dD_Q/dx, see parabolic_d."""
    return 0.5 * x * parabolic_d(Q, x) - parabolic_d(Q + 1.0, x)


def kummer_solution(Q: float, x: float, odd: bool = False) -> float:
    """
    Even or odd solution of the Weber equation normalized at the origin.

    even: e^{-x^2/4} M(-Q/2, 1/2, x^2/2), y(0) = 1, y'(0) = 0
    odd:  x e^{-x^2/4} M((1-Q)/2, 3/2, x^2/2), y(0) = 0, y'(0) = 1

    D_Q(x) + D_Q(-x) and D_Q(x) - D_Q(-x) are these times 2 D_Q(0) and
    2 D_Q'(0), which vanish at odd and even integer Q respectively; the
    solutions here have no such zeros in Q.

    Args:
        Q (float): Real order.
        x (float): Real argument, |x| <= 60.
        odd (bool): Select the odd solution.

    Returns:
        float: y(x).
    """
    Q = float(Q)
    x = float(x)
    _check_domain(Q, x)
    z = 0.5 * x * x
    a, b = (0.5 * (1.0 - Q), 1.5) if odd else (-0.5 * Q, 0.5)
    factor = x if odd else 1.0
    s, s_abs, tail = _kummer_m(a, b, z)
    envelope = math.exp(-0.5 * z)
    value = envelope * factor * s
    error = envelope * abs(factor) * (_ROUNDING * s_abs + tail)
    if math.isfinite(value) and error <= PRECISION_TOL * max(1.0, abs(value)):
        return value
    logger.debug("kummer_solution(%r, %r): switching to %d-digit arithmetic", Q, x, HIGH_PRECISION_DPS)
    with mpmath.workdps(HIGH_PRECISION_DPS):
        return float(factor * mpmath.exp(-0.5 * z) * mpmath.hyp1f1(a, b, z))
