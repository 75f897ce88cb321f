"""
Default tolerances, ranges and sample grids.

All quantities are in harmonic-oscillator units (hbar = m = omega = 1).
"""
from dataclasses import dataclass

import numpy as np

# Order range for the transcendental scans (epsilon = Q + 1/2)
Q_MIN = -40.0
Q_MAX = 40.0
Q_STEP = 0.01

ROOT_TOL = 1e-10
DARK_TOL = 1e-9
POLE_TOL = 1e-8
DEGENERACY_TOL = 1e-8

# Wavefunction quadrature: [-L, L] with L = c + TAIL_LENGTH
PANEL_TOL = 1e-10
TAIL_LENGTH = 12.0
MAX_DEPTH = 50

# Continuation window, in units of Q_STEP
SEED_WINDOW = 5

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class SolverConfig:
    """
    Knobs of the finite-g and hard-wall root finders.

    Attributes:
        q_min (float): Lowest order scanned.
        q_max (float): Highest order scanned.
        q_step (float): Scan grid step in Q.
        root_tol (float): Bisection tolerance on Q.
        dark_tol (float): Distance in c below which a displacement is dark.
        pole_tol (float): Relative size of the denominator that flags a pole.
        degeneracy_tol (float): Energy gap below which levels coincide.
        validate_nodes (bool): Check every solved label against its node count.
    """
    q_min: float = Q_MIN
    q_max: float = Q_MAX
    q_step: float = Q_STEP
    root_tol: float = ROOT_TOL
    dark_tol: float = DARK_TOL
    pole_tol: float = POLE_TOL
    degeneracy_tol: float = DEGENERACY_TOL
    validate_nodes: bool = True


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Settings of the adaptive Simpson integrals over a wavefunction.

    Attributes:
        panel_tol (float): Absolute tolerance of each panel.
        tail (float): Extent of the domain beyond the delta positions.
        max_depth (int): Recursion cap of the adaptive rule.
    """
    panel_tol: float = PANEL_TOL
    tail: float = TAIL_LENGTH
    max_depth: int = MAX_DEPTH


DEFAULT_SOLVER = SolverConfig()
DEFAULT_QUADRATURE = QuadratureConfig()


def default_g_grid(points: int = 65, g_min: float = -2.0, g_max: float = 20.0) -> np.ndarray:
    """
    Coupling samples for the level-vs-g curves, densest around g = 0.

    Args:
        points (int): Number of samples.
        g_min (float): Lowest coupling.
        g_max (float): Highest coupling.

    Returns:
        np.ndarray: Ascending couplings, endpoints included.
    """
    t = np.linspace(np.arcsinh(g_min), np.arcsinh(g_max), points)
    grid = np.sinh(t)
    grid[0], grid[-1] = g_min, g_max
    return grid


def default_c_grid(points: int = 160, c_min: float = 0.05, c_max: float = 4.0) -> np.ndarray:
    """Displacement samples for the level-vs-c and width curves."""
    return np.linspace(c_min, c_max, points)
