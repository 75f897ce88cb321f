"""
Exception hierarchy shared by every offdelta module.

Each error also derives from the builtin it specializes, so code that only
knows about ``ValueError`` or ``RuntimeError`` keeps catching it.
"""
from typing import Optional


class OffdeltaError(Exception):
    """Base class for all offdelta errors."""


class GammaPoleError(OffdeltaError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class DomainError(OffdeltaError, ValueError):
    """Argument outside the documented domain of an operation."""


class AccuracyLossError(OffdeltaError, ArithmeticError):
    """
    Raised when an error estimate exceeds the requested tolerance.

    Attributes:
        value (float): The (unreliable) value that was computed.
        est_abs_error (float): The estimated absolute error.
    """

    def __init__(self, message: str, value: float, est_abs_error: float):
        super().__init__(message)
        self.value = value
        self.est_abs_error = est_abs_error


class DisplacementZeroError(OffdeltaError, ValueError):
    """The spectral function was asked for c = 0, which has its own equation."""


class RangeExhaustedError(OffdeltaError, RuntimeError):
    """
    Fewer roots than requested were found inside the scanned Q range.

    Attributes:
        found (int): Number of levels located.
        requested (int): Number of levels asked for.
        q_max (float): Upper end of the range that was scanned.
    """

    def __init__(self, found: int, requested: int, q_max: float):
        super().__init__(
            f"only {found} of {requested} levels below Q_max={q_max:g}; widen the range"
        )
        self.found = found
        self.requested = requested
        self.q_max = q_max


class LabelingError(OffdeltaError, RuntimeError):
    """Node count of a solved level disagrees with its label."""


class NormalizationError(OffdeltaError, RuntimeError):
    """Quadrature for a wavefunction norm did not converge."""


class GridSpecError(OffdeltaError, ValueError):
    """Finite-difference grid violates its invariants."""


class OracleConvergenceError(OffdeltaError, RuntimeError):
    """The tridiagonal eigensolver failed to converge."""


class SweepError(OffdeltaError, RuntimeError):
    """
    A parameter sweep failed at one sample.

    Attributes:
        sample_index (int): Position of the failing sample in the axis.
        sample_value (float): Axis value of the failing sample.
        cause (Exception): The underlying solver error.
    """

    def __init__(self, sample_index: int, sample_value: float, cause: Exception):
        super().__init__(f"sample {sample_index} (value {sample_value:g}) failed: {cause}")
        self.sample_index = sample_index
        self.sample_value = sample_value
        self.cause = cause


def describe(error: Exception, context: Optional[str] = None) -> str:
    """
    Formats an error for the command-line error stream.

    Args:
        error (Exception): The error to describe.
        context (Optional[str]): Short prefix naming the failing step.

    Returns:
        str: A one-line message.
    """
    name = type(error).__name__
    if context:
        return f"Error: {context}: {name}: {error}"
    return f"Error: {name}: {error}"
