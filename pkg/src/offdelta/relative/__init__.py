from offdelta.relative.model import EnergyLevel, LevelKind, ModelParams, Parity
from offdelta.relative.spectrum import (
    SectorScanner,
    dark_orders,
    first_order_shift,
    solve_levels,
    solve_levels_widening,
    solve_spectrum,
    spectral_function,
)
from offdelta.relative.wavefunction import (
    PiecewiseWavefunction,
    boundary_residuals,
    build_wavefunction,
    evaluate_wavefunction,
    mass_inside,
    node_count,
    width,
)
