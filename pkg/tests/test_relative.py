import inspect
import math

import mpmath
import numpy as np
import pytest

from offdelta.hardwall import inside_levels, limit_energies
from offdelta.oracle import DeltaModel, GridSpec, certified_error, contact_reference
from offdelta.relative import (
    EnergyLevel,
    LevelKind,
    ModelParams,
    Parity,
    dark_orders,
    first_order_shift,
    solve_levels,
    solve_levels_widening,
    solve_spectrum,
    spectral_function,
)
from offdelta.utils.config import DEFAULT_SOLVER, SolverConfig
from offdelta.utils.errors import DisplacementZeroError, DomainError, RangeExhaustedError

DARK = {
    2: 1.0,
    3: math.sqrt(3.0),
    4: math.sqrt(3.0 - math.sqrt(6.0)),
}


def mp_spectral(Q, g, c, sign):
    with mpmath.workdps(40):
        a, b = mpmath.pcfd(Q, c), mpmath.pcfd(Q, -c)
        a1, b1 = mpmath.pcfd(Q + 1, c), mpmath.pcfd(Q + 1, -c)
        return float((a * b1 + b * a1) / (b + sign * a) + g * a)


def test_model_params_validation():
    with pytest.raises(DomainError):
        ModelParams(1.0, -0.1)
    with pytest.raises(DomainError):
        ModelParams(math.inf, 1.0)


def test_energy_level_parity_must_match_label():
    with pytest.raises(DomainError):
        EnergyLevel(3, Parity.EVEN, 3.5)
    assert EnergyLevel(3, Parity.ODD, 3.7).Q == pytest.approx(3.2)


def test_spectral_function_non_interacting_root():
    value, near_pole = spectral_function(0.0, ModelParams(0.0, 0.75), Parity.EVEN)
    assert value == pytest.approx(0.0, abs=1e-12)
    assert not near_pole


@pytest.mark.parametrize("g", [-5.0, 0.3, 10.0, 1000.0])
def test_spectral_function_at_dark_configuration(g):
    value, near_pole = spectral_function(2.0, ModelParams(g, 1.0), Parity.EVEN)
    assert value == 0.0
    assert not near_pole
    other, _ = spectral_function(2.0, ModelParams(g, 1.0), Parity.ODD)
    assert math.isfinite(other)


@pytest.mark.parametrize("Q, g, c, parity", [
    (0.8, 10.0, 0.75, Parity.EVEN),
    (1.9, -1.0, 1.2, Parity.ODD),
    (3.45, 2.0, 0.4, Parity.EVEN),
])
def test_spectral_function_matches_independent_assembly(Q, g, c, parity):
    value, _ = spectral_function(Q, ModelParams(g, c), parity)
    assert value == pytest.approx(mp_spectral(Q, g, c, parity.sign), rel=1e-6)


def test_spectral_function_rejects_contact():
    with pytest.raises(DisplacementZeroError):
        spectral_function(0.3, ModelParams(1.0, 0.0), Parity.EVEN)


def test_non_interacting_levels():
    levels = solve_levels(ModelParams(0.0, 0.75), Parity.EVEN, 3)
    assert [level.epsilon for level in levels] == pytest.approx([0.5, 2.5, 4.5], abs=1e-9)
    assert [level.n for level in levels] == [0, 2, 4]
    odd = solve_levels(ModelParams(0.0, 2.0), Parity.ODD, 2)
    assert [level.epsilon for level in odd] == pytest.approx([1.5, 3.5], abs=1e-9)


def test_dark_level_is_reported():
    levels = solve_levels(ModelParams(10.0, 1.0), Parity.EVEN, 2)
    assert levels[1].n == 2
    assert levels[1].epsilon == 2.5
    assert levels[1].kind is LevelKind.DARK
    assert levels[0].kind is LevelKind.REGULAR
    assert 0.5 < levels[0].epsilon < 2.5


@pytest.mark.parametrize("n", sorted(DARK))
@pytest.mark.parametrize("g", [-5.0, 1.0, 10.0, 100.0])
def test_dark_invariance(n, g):
    parity = Parity.of(n)
    levels = solve_levels(ModelParams(g, DARK[n]), parity, n // 2 + 1)
    assert levels[-1].n == n
    assert levels[-1].epsilon == n + 0.5
    assert levels[-1].is_dark


@pytest.mark.parametrize("n", sorted(DARK))
@pytest.mark.parametrize("g", [-5.0, 1.0, 10.0])
@pytest.mark.parametrize("offset", [-1e-3, 1e-3])
def test_near_dark_levels_stay_close(n, g, offset):
    parity = Parity.of(n)
    levels = solve_levels(ModelParams(g, DARK[n] + offset), parity, n // 2 + 1)
    assert levels[-1].kind is LevelKind.REGULAR
    assert levels[-1].epsilon == pytest.approx(n + 0.5, abs=5e-2)


def test_dark_orders_registry():
    assert 2 in dark_orders(1.0, Parity.EVEN, 40.0)
    assert 2 not in dark_orders(1.0 + 1e-6, Parity.EVEN, 40.0)
    assert dark_orders(DARK[4], Parity.EVEN, 10.0)[0] == 4
    assert 3 in dark_orders(DARK[3], Parity.ODD, 10.0)
    assert dark_orders(0.0, Parity.ODD, 40.0) == []


def test_dark_orders_stay_in_their_sector():
    assert dark_orders(1.0, Parity.EVEN, 10.0) == [2]
    assert dark_orders(1.0, Parity.ODD, 10.0) == []
    assert dark_orders(DARK[3], Parity.EVEN, 10.0) == []
    assert dark_orders(DARK[3], Parity.ODD, 10.0) == [3]


def test_dark_orders_default_tolerance_follows_solver_config():
    assert inspect.signature(dark_orders).parameters["tol"].default == DEFAULT_SOLVER.dark_tol


def test_odd_displacement_dark_order_stays_out_of_even_sector():
    levels = solve_levels(ModelParams(10.0, DARK[3]), Parity.EVEN, 3)
    assert [level.n for level in levels] == [0, 2, 4]
    assert not any(level.is_dark for level in levels)


@pytest.mark.parametrize("Q, parity", [(1.0, Parity.EVEN), (3.0, Parity.EVEN), (2.0, Parity.ODD)])
def test_spectral_function_continuous_at_other_parity_integers(Q, parity):
    params = ModelParams(10.0, 0.1)
    value, near_pole = spectral_function(Q, params, parity)
    assert math.isfinite(value)
    assert not near_pole
    h = 1e-4
    limit = 0.5 * (mp_spectral(Q - h, 10.0, 0.1, parity.sign) + mp_spectral(Q + h, 10.0, 0.1, parity.sign))
    assert value == pytest.approx(limit, rel=1e-3)


@pytest.mark.parametrize("g, c", [(10.0, 0.1), (5.0, 0.2)])
def test_levels_next_to_integer_orders_match_grid_oracle(g, c):
    params = ModelParams(g, c)
    levels = solve_spectrum(params, 4)
    reference = certified_error(params, GridSpec(10.0, 0.002, DeltaModel.NEAREST_POINT), 4)
    assert [level.n for level in levels] == [0, 1, 2, 3]
    for level, value, error in zip(levels, reference.eigenvalues, reference.errors):
        assert abs(level.epsilon - value) <= error + 1e-6


def test_repulsive_ground_state_at_small_displacement():
    levels = solve_levels(ModelParams(10.0, 0.1), Parity.EVEN, 2)
    assert [level.n for level in levels] == [0, 2]
    assert levels[0].epsilon == pytest.approx(1.49919, abs=1e-3)


@pytest.mark.parametrize("g, c", [(1.0, 0.75), (10.0, 0.75), (10.0, 1.5), (-1.0, 0.75)])
@pytest.mark.parametrize("model", list(DeltaModel))
def test_levels_match_grid_oracle(g, c, model):
    params = ModelParams(g, c)
    levels = solve_spectrum(params, 6)
    reference = certified_error(params, GridSpec(10.0, 0.002, model), 6)
    assert [level.n for level in levels] == list(range(6))
    for level, value, error in zip(levels, reference.eigenvalues, reference.errors):
        assert error <= 5e-3
        assert abs(level.epsilon - value) <= error + 1e-6


@pytest.mark.parametrize("g", [-1.0, 1.0, 10.0])
def test_no_finite_coupling_degeneracy(g):
    energies = [level.epsilon for level in solve_spectrum(ModelParams(g, 0.75), 8)]
    assert all(b - a > 1e-6 for a, b in zip(energies, energies[1:]))


def test_levels_increase_with_coupling():
    c = 0.6
    couplings = [-5.0, -1.0, 0.0, 1.0, 10.0, 100.0]
    table = np.array([[level.epsilon for level in solve_spectrum(ModelParams(g, c), 4)] for g in couplings])
    assert np.all(np.diff(table, axis=0) > 0.0)
    for n in range(4):
        assert table[-1, n] > n + 0.5


@pytest.mark.parametrize("g", [1.0, 10.0, 100.0])
def test_positive_coupling_levels_bounded_by_hard_wall(g):
    c = 1.3
    for parity in Parity:
        levels = solve_levels(ModelParams(g, c), parity, 3)
        ceiling = limit_energies(c, 3, parity)
        for level, top in zip(levels, ceiling):
            assert level.n + 0.5 < level.epsilon < top


@pytest.mark.parametrize("n", [1, 3, 5])
def test_contact_limit_odd_levels_are_free(n):
    levels = solve_levels(ModelParams(10.0, 1e-4), Parity.ODD, n // 2 + 1)
    assert levels[-1].epsilon == pytest.approx(n + 0.5, abs=1e-3)


def test_contact_levels_solve_merged_delta_condition():
    for g in (1.0, 10.0, -0.5):
        levels = solve_levels(ModelParams(g, 0.0), Parity.EVEN, 3)
        assert [level.epsilon for level in levels] == pytest.approx(contact_reference(g, 3), abs=1e-9)
    odd = solve_levels(ModelParams(4.0, 0.0), Parity.ODD, 2)
    assert [level.epsilon for level in odd] == [1.5, 3.5]


@pytest.mark.parametrize("g", [1.0, 10.0])
def test_even_levels_converge_linearly_to_contact(g):
    reference = contact_reference(g, 2)
    gaps = []
    for c in (1e-4, 1e-5):
        levels = solve_levels(ModelParams(g, c), Parity.EVEN, 2)
        gaps.append(max(abs(level.epsilon - ref) for level, ref in zip(levels, reference)))
    assert gaps[0] < 5e-2
    assert 0.03 < gaps[1] / gaps[0] < 0.3


@pytest.mark.parametrize("g", [0.0, 1.0, 10.0, 100.0])
def test_ground_state_ignores_distant_deltas(g):
    level = solve_levels(ModelParams(g, 6.0), Parity.EVEN, 1)[0]
    assert level.epsilon == pytest.approx(0.5, abs=1e-5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_distant_deltas_shift_by_first_order(n):
    params = ModelParams(0.1, 6.0)
    level = solve_levels(params, Parity.of(n), n // 2 + 1)[-1]
    assert level.epsilon - (n + 0.5) == pytest.approx(first_order_shift(n, params), rel=0.1)


def test_strong_coupling_approaches_hard_wall():
    for c in (0.75, 1.5):
        ceiling = limit_energies(c, 4)
        gaps = []
        for g in (1e2, 1e3, 1e4):
            levels = solve_spectrum(ModelParams(g, c), 4)
            gaps.append([top - level.epsilon for level, top in zip(levels, ceiling)])
        gaps = np.array(gaps)
        assert np.all(np.abs(gaps[-1]) <= 1e-2)
        assert np.all(np.diff(gaps, axis=0) < 0.0)


def test_poles_are_not_reported_as_levels():
    params = ModelParams(10.0, 1.5)
    levels = solve_levels(params, Parity.EVEN, 4)
    for wall in inside_levels(1.5, Parity.EVEN, 3):
        assert all(abs(level.epsilon - wall.epsilon) > 1e-6 for level in levels)


@pytest.mark.slow
def test_triple_degeneracy_clustering():
    spreads, means = [], []
    for g in (10.0, 100.0, 1000.0):
        energies = [level.epsilon for level in solve_spectrum(ModelParams(g, 0.75), 5)[2:5]]
        spreads.append(max(energies) - min(energies))
        means.append(np.mean(energies))
    assert spreads[0] > spreads[1] > spreads[2]
    assert spreads[2] <= 0.1
    assert means[2] == pytest.approx(4.5, abs=0.1)


def test_range_exhaustion_and_widening():
    narrow = SolverConfig(q_max=3.0)
    with pytest.raises(RangeExhaustedError) as info:
        solve_levels(ModelParams(1.0, 0.75), Parity.EVEN, 4, narrow)
    assert info.value.requested == 4
    assert info.value.found < 4
    levels = solve_levels_widening(ModelParams(1.0, 0.75), Parity.EVEN, 4, narrow)
    assert [level.n for level in levels] == [0, 2, 4, 6]


def test_bound_state_below_trap_ground():
    config = SolverConfig(q_min=-3.0)
    levels = solve_levels(ModelParams(-3.0, 2.0), Parity.EVEN, 2, config)
    assert levels[0].epsilon < 0.5
    assert levels[0].n == 0


def test_count_limits():
    with pytest.raises(ValueError):
        solve_levels(ModelParams(1.0, 1.0), Parity.EVEN, 0)
    with pytest.raises(ValueError):
        solve_levels(ModelParams(1.0, 1.0), Parity.EVEN, 41)
