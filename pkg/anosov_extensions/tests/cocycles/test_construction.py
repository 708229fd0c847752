import math

import pytest

from anosov_extensions.cocycles import (
    ConstructionError,
    construct_inseparable,
    periodic_data,
)
from anosov_extensions.separation import Verdict, decide, orthant_coverage


def test_single_level(cat_map):
    result = construct_inseparable(cat_map, 1)
    assert result.levels == 1
    assert len(result.orbits) == 2
    data = periodic_data(result.cocycle, cat_map, 2)
    signs = {w[0] > 0 for w in data.weights(1) if w[0] != 0}
    assert signs == {True, False}
    assert orthant_coverage(data.weights(1)).covered


def test_construction_covers_all_orthants(cat_map, construction):
    assert construction.levels == 5
    assert len(construction.orbits) == 32
    assert max(orbit.period for orbit in construction.orbits) <= 5
    data = periodic_data(construction.cocycle, cat_map, 5)
    for k in range(1, 6):
        cover = orthant_coverage(data.weights(k))
        assert cover.covered, f"level {k} misses orthants {cover.missing}"


def test_construction_lipschitz_bounds(construction):
    for k, coordinate in enumerate(construction.cocycle.coordinates, start=1):
        assert coordinate.supports_disjoint
        assert coordinate.lipschitz_constant() <= math.ldexp(1.0, -(k - 1))
        assert construction.steps[k - 1].lipschitz_constant == coordinate.lipschitz_constant()


def test_construction_orbit_weights_have_prescribed_signs(cat_map, construction):
    data = periodic_data(construction.cocycle, cat_map, 5)
    weights = {entry.orbit.base: entry.weight for entry in data.entries}
    for j, orbit in enumerate(construction.orbits):
        weight = weights[orbit.base]
        for k, sign in enumerate(construction.orbit_signs(j), start=1):
            assert weight.coordinate(k) * sign > 0


def test_construction_bumps_every_pool_orbit_at_every_level(construction):
    for k, coordinate in enumerate(construction.cocycle.coordinates, start=1):
        assert len(coordinate.bumps) == sum(len(orbit.points) for orbit in construction.orbits)
        patterns = {}
        for j in range(len(construction.orbits)):
            signs = construction.orbit_signs(j)[:k]
            patterns[signs] = patterns.get(signs, 0) + 1
        assert len(patterns) == 2**k
        assert set(patterns.values()) == {2 ** (5 - k)}


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_construction_is_inseparable(cat_map, levels):
    f = construct_inseparable(cat_map, levels).cocycle
    data = periodic_data(f, cat_map, 4)
    for k in range(1, levels + 1):
        assert decide(data.weights(k)).verdict == Verdict.INSEPARABLE


def test_construction_is_deterministic(cat_map):
    assert construct_inseparable(cat_map, 2).cocycle == construct_inseparable(cat_map, 2).cocycle


def test_construction_needs_enough_orbits(cat_map):
    with pytest.raises(ConstructionError, match=r"needs 32 periodic orbits"):
        construct_inseparable(cat_map, 5, n_max=3)
    with pytest.raises(ValueError, match=r"at least 1"):
        construct_inseparable(cat_map, 0)
