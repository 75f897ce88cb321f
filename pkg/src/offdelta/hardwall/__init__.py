from offdelta.hardwall.levels import (
    DarkPoint,
    HardwallLevel,
    Regime,
    WallSide,
    classify_regime,
    dark_points,
    inside_levels,
    limit_energies,
    merged_spectrum,
    outside_levels,
    regime_boundaries,
    symmetrized_outside,
)
