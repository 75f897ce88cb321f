"""
Real-argument gamma function by the Lanczos approximation.
"""
import math

from offdelta.utils.errors import GammaPoleError

# Lanczos coefficients for g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def is_pole(x: float) -> bool:
    """True when x is a non-positive integer."""
    return x <= 0.0 and x == math.floor(x)


def sin_pi(x: float) -> float:
    """sin(pi x) with the argument reduced exactly before multiplying by pi."""
    n = round(x)
    s = math.sin(math.pi * (x - n))
    return -s if n % 2 else s


def cos_pi(x: float) -> float:
    """cos(pi x) with exact argument reduction."""
    n = round(x)
    c = math.cos(math.pi * (x - n))
    return -c if n % 2 else c


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    half_power = t ** (0.5 * (x + 0.5))
    return _SQRT_TWO_PI * half_power * math.exp(-t) * half_power * acc


def gamma_real(x: float) -> float:
    """
    Gamma function of a real argument.

    Positive integers up to 170 are returned exactly as factorials; negative
    non-integers go through the reflection formula.

    Args:
        x (float): Argument, not a non-positive integer.

    Returns:
        float: Gamma(x), or +/-inf when it overflows.

    Raises:
        GammaPoleError: If x is 0, -1, -2, ...
    """
    x = float(x)
    if math.isnan(x):
        raise GammaPoleError("gamma of NaN")
    if is_pole(x):
        raise GammaPoleError(f"gamma has a pole at x={x:g}")
    if x == math.floor(x) and x <= 171.0:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (sin_pi(x) * _lanczos(1.0 - x))
    if x > 171.7:
        return math.inf
    return _lanczos(x)


def rgamma(x: float) -> float:
    """
    Reciprocal gamma function, an entire function of x.

    Returns:
        float: 1/Gamma(x); exactly 0 at the poles of Gamma and for overflow.
    """
    if is_pole(x):
        return 0.0
    value = gamma_real(x)
    if math.isinf(value):
        return 0.0
    return 1.0 / value
