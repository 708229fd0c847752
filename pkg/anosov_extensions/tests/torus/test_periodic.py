from fractions import Fraction

import pytest

from anosov_extensions.torus import (
    RationalTorusPoint,
    ToralAutomorphism,
    apply_exact,
    count_points,
    grid_periodic_points,
    minimal_period_counts,
    orbit_of,
    periodic_points,
    uniformity_chi_square,
)

CAT_MAP_COUNTS = [1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125, 39601, 103680]


@pytest.mark.parametrize("n", range(1, 13))
def test_cat_map_periodic_point_counts(cat_map, n):
    orbits = periodic_points(cat_map, n)
    assert abs(cat_map.periodic_determinant(n)) == CAT_MAP_COUNTS[n - 1]
    assert count_points(orbits) == CAT_MAP_COUNTS[n - 1]
    for orbit in orbits:
        assert n % orbit.period == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_cat_map_grid_oracle(cat_map, n):
    enumerated = {p.to_fractions() for o in periodic_points(cat_map, n) for p in o.points}
    scanned = {p.to_fractions() for p in grid_periodic_points(cat_map, n)}
    assert enumerated == scanned


@pytest.mark.parametrize("n", range(1, 4))
def test_three_dimensional_grid_oracle(n):
    automorphism = ToralAutomorphism.from_matrix([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
    orbits = periodic_points(automorphism, n)
    assert count_points(orbits) == abs(automorphism.periodic_determinant(n))
    enumerated = {p.to_fractions() for o in orbits for p in o.points}
    scanned = {p.to_fractions() for p in grid_periodic_points(automorphism, n)}
    assert enumerated == scanned


def test_cat_map_fixed_points(cat_map):
    orbits = periodic_points(cat_map, 1)
    assert len(orbits) == 1
    assert orbits[0].base.to_fractions() == (0, 0)


def test_cat_map_period_two(cat_map):
    orbits = periodic_points(cat_map, 2)
    assert count_points(orbits) == 5
    assert minimal_period_counts(orbits) == {1: 1, 2: 2}
    points = {p.to_fractions() for o in orbits for p in o.points}
    assert (Fraction(1, 5), Fraction(2, 5)) in points
    for orbit in orbits:
        for point in orbit.points:
            image = apply_exact(cat_map, apply_exact(cat_map, point))
            assert image == point


def test_orbits_per_period(cat_map):
    counts = {}
    for n in range(1, 6):
        counts.update(
            {p: c for p, c in minimal_period_counts(periodic_points(cat_map, n)).items() if p == n}
        )
    assert counts == {1: 1, 2: 2, 3: 5, 4: 10, 5: 24}


def test_orbit_of(cat_map):
    orbit = orbit_of(cat_map, RationalTorusPoint((4, 3), 5))
    assert orbit.period == 2
    assert orbit.base == RationalTorusPoint((1, 2), 5)
    assert orbit.points == (RationalTorusPoint((1, 2), 5), RationalTorusPoint((4, 3), 5))


def test_uniformity_chi_square(cat_map):
    result = uniformity_chi_square(cat_map, samples=50_000, bins_per_dim=10, seed=3)
    assert result.degrees_of_freedom == 99
    # Mean 99, standard deviation about 14.
    assert result.statistic < 99 + 6 * 14
