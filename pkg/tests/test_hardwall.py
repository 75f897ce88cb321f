import math

import pytest

from offdelta.hardwall import (
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
from offdelta.oracle import GridSpec, grid_eigensolve
from offdelta.relative import ModelParams, Parity
from offdelta.utils.errors import DomainError


@pytest.mark.parametrize("n, tol", [(0, 1e-6), (1, 1e-5), (2, 1e-4), (3, 1e-3)])
def test_distant_walls_recover_oscillator(n, tol):
    parity = Parity.of(n)
    level = inside_levels(6.0, parity, n // 2 + 1)[-1]
    assert level.kind is WallSide.INSIDE
    assert level.epsilon == pytest.approx(n + 0.5, abs=tol)
    assert level.epsilon >= n + 0.5 - 1e-10


def test_narrow_box_ground_state():
    level = inside_levels(0.5, Parity.EVEN, 1)[0]
    assert level.epsilon == pytest.approx(math.pi ** 2, rel=0.05)


def test_inside_levels_need_positive_displacement():
    with pytest.raises(DomainError):
        inside_levels(0.0, Parity.EVEN, 1)


def test_outside_levels_at_zero_displacement():
    energies = [level.epsilon for level in outside_levels(0.0, 3)]
    assert energies == pytest.approx([1.5, 3.5, 5.5], abs=1e-9)


def test_outside_levels_rise_with_displacement():
    previous = None
    for c in (2.0, 3.0, 4.0):
        energies = [level.epsilon for level in outside_levels(c, 3)]
        assert energies == sorted(energies)
        if previous is not None:
            assert all(e > p for e, p in zip(energies, previous))
        previous = energies


def test_outside_pair_is_doubly_degenerate():
    level = outside_levels(1.0, 1)[0]
    assert level.multiplicity == 2
    assert level.parity is None


def test_limit_energies_match_strong_coupling_grid():
    c = 0.75
    reference = grid_eigensolve(ModelParams(1e6, c), GridSpec(10.0, 0.002), 4)
    assert limit_energies(c, 4) == pytest.approx(reference.eigenvalues, abs=1e-2)


def test_limit_energies_per_sector():
    c = 1.5
    even = limit_energies(c, 3, Parity.EVEN)
    inside = [level.epsilon for level in inside_levels(c, Parity.EVEN, 3)]
    outside = [level.epsilon for level in outside_levels(c, 3)]
    assert even == pytest.approx(sorted(inside + outside)[:3])


def test_dark_points():
    points = dark_points(4, 3.0)
    assert [p.n for p in points] == [4, 2, 3, 4]
    expected = [math.sqrt(3.0 - math.sqrt(6.0)), 1.0, math.sqrt(3.0), math.sqrt(3.0 + math.sqrt(6.0))]
    assert [p.c_star for p in points] == pytest.approx(expected, rel=1e-12)
    assert [p.parity for p in points] == [Parity.EVEN, Parity.EVEN, Parity.ODD, Parity.EVEN]


def test_dark_points_ascending_for_many_orders():
    points = dark_points(20, 5.0)
    values = [p.c_star for p in points]
    assert values == sorted(values)
    assert all(0.0 < v <= 5.0 for v in values)


@pytest.mark.parametrize("c, epsilon", [(1.0, 2.5), (math.sqrt(3.0), 3.5)])
def test_triple_degeneracy_at_dark_point(c, epsilon):
    levels = merged_spectrum(c, 8)
    triples = [level for level in levels if level.triple]
    assert {level.kind for level in triples} == {WallSide.INSIDE, WallSide.OUTSIDE}
    assert all(level.epsilon == pytest.approx(epsilon, abs=1e-8) for level in triples)
    assert sum(level.multiplicity for level in triples) == 3


def test_merged_spectrum_close_walls_is_all_outside():
    levels = merged_spectrum(0.3, 4)
    assert all(level.kind is WallSide.OUTSIDE for level in levels)


def test_merged_spectrum_distant_walls_is_all_inside():
    levels = merged_spectrum(6.0, 4)
    assert all(level.kind is WallSide.INSIDE for level in levels)
    assert [level.epsilon for level in levels] == pytest.approx([0.5, 1.5, 2.5, 3.5], abs=1e-3)


def test_crossover_ground_state_is_inside():
    levels = merged_spectrum(1.5, 3)
    assert levels[0].kind is WallSide.INSIDE


@pytest.mark.parametrize("c, regime", [(0.3, Regime.EXCLUSION), (1.5, Regime.CROSSOVER), (6.0, Regime.TRUNCATION)])
def test_regimes(c, regime):
    assert classify_regime(c) is regime


def test_regime_boundaries():
    boundaries = regime_boundaries([0.3, 1.5, 6.0], tol=1e-3)
    assert [(below, above) for _, below, above in boundaries] == [
        (Regime.EXCLUSION, Regime.CROSSOVER),
        (Regime.CROSSOVER, Regime.TRUNCATION),
    ]
    assert 0.3 < boundaries[0][0] < 1.5 < boundaries[1][0] < 6.0
    for c, below, above in boundaries:
        assert classify_regime(c - 2e-3) is below
        assert classify_regime(c + 2e-3) is above


def test_symmetrized_outside():
    c = 1.2
    level = outside_levels(c, 1)[0]
    for x in (-c, -0.5, 0.0, 0.7, c):
        assert symmetrized_outside(level, c, Parity.EVEN, x) == 0.0
    assert symmetrized_outside(level, c, Parity.ODD, 2.0) == pytest.approx(
        -symmetrized_outside(level, c, Parity.ODD, -2.0)
    )
    assert symmetrized_outside(level, c, Parity.EVEN, 2.0) == pytest.approx(
        symmetrized_outside(level, c, Parity.EVEN, -2.0)
    )
    assert symmetrized_outside(level, c, Parity.EVEN, c + 1e-8) == pytest.approx(0.0, abs=1e-6)


def test_symmetrized_outside_rejects_inside_levels():
    level = HardwallLevel(WallSide.INSIDE, Parity.EVEN, 0, 0.5)
    with pytest.raises(DomainError):
        symmetrized_outside(level, 6.0, Parity.EVEN, 7.0)
