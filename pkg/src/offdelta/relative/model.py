"""
Value types of the relative two-body problem.
"""
import enum
import math
from dataclasses import dataclass

from offdelta.utils.errors import DomainError


class Parity(enum.Enum):
    """Symmetry of the relative wavefunction under x -> -x (exchange of the particles)."""
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1

    @property
    def offset(self) -> int:
        """Smallest quantum number of the sector."""
        return 0 if self is Parity.EVEN else 1

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD


class LevelKind(enum.Enum):
    REGULAR = "regular"
    DARK = "dark"


@dataclass(frozen=True)
class ModelParams:
    """
    Coupling g and half-distance c of the two delta potentials.

    Attributes:
        g (float): Finite coupling strength (g = +inf lives in offdelta.hardwall).
        c (float): Displacement, c >= 0.
    """
    g: float
    c: float

    def __post_init__(self):
        if not math.isfinite(self.g):
            raise DomainError(f"coupling must be finite, got g={self.g!r}")
        if not (math.isfinite(self.c) and self.c >= 0.0):
            raise DomainError(f"displacement must be finite and >= 0, got c={self.c!r}")


@dataclass(frozen=True)
class EnergyLevel:
    """
    One eigenvalue of the relative Hamiltonian.

    Attributes:
        n (int): Quantum number, equal to the number of nodes.
        parity (Parity): Sector, (-1)^n.
        epsilon (float): Energy in units of hbar*omega.
        kind (LevelKind): DARK when the level is the untouched oscillator state.
        est_error (float): Uncertainty of epsilon from root refinement.
    """
    n: int
    parity: Parity
    epsilon: float
    kind: LevelKind = LevelKind.REGULAR
    est_error: float = 0.0

    def __post_init__(self):
        if self.n < 0 or Parity.of(self.n) is not self.parity:
            raise DomainError(f"label n={self.n} inconsistent with parity {self.parity.value}")

    @property
    def Q(self) -> float:
        """Order of the parabolic cylinder functions, epsilon - 1/2."""
        return self.epsilon - 0.5

    @property
    def is_dark(self) -> bool:
        return self.kind is LevelKind.DARK
