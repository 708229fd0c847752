from fractions import Fraction

import pytest
import torch

from anosov_extensions.torus import (
    RationalTorusPoint,
    TorusPoint,
    exact_torus_distance_squared,
    torus_distance,
    torus_distance_batch,
)
from anosov_extensions.util.pytorch import DTYPE


@pytest.mark.parametrize(
    "x,y,expected",
    [
        ((0.0, 0.0), (0.0, 0.0), 0.0),
        ((0.0, 0.0), (0.9, 0.0), 0.1),
        ((0.25, 0.0), (0.75, 0.0), 0.5),
        ((0.1, 0.1), (0.9, 0.9), 0.2 * 2**0.5),
    ],
)
def test_torus_distance(x, y, expected):
    assert torus_distance(TorusPoint(x), TorusPoint(y)) == pytest.approx(expected)
    assert torus_distance(TorusPoint(y), TorusPoint(x)) == pytest.approx(expected)


def test_torus_distance_rejects_dimension_mismatch():
    with pytest.raises(ValueError, match=r"dimension"):
        torus_distance(TorusPoint((0.1,)), TorusPoint((0.1, 0.2)))


def test_torus_distance_triangle_inequality():
    generator = torch.Generator().manual_seed(1)
    x, y, z = torch.rand((3, 500, 3), dtype=DTYPE, generator=generator)
    dxy = torus_distance_batch(x, y)
    dyz = torus_distance_batch(y, z)
    dxz = torus_distance_batch(x, z)
    assert bool((dxz <= dxy + dyz + 1e-12).all())
    assert bool((dxy <= 3**0.5 / 2).all())


def test_torus_point_validation():
    with pytest.raises(ValueError, match=r"\[0, 1\)"):
        TorusPoint((1.0, 0.0))
    assert TorusPoint.from_coords((1.25, -0.25)).coords == (0.25, 0.75)
    assert TorusPoint.from_coords((-1e-20,)).coords == (0.0,)


def test_rational_point():
    point = RationalTorusPoint.from_fractions((Fraction(6, 5), Fraction(-1, 3)))
    assert point == RationalTorusPoint((3, 10), 15)
    assert point.to_fractions() == (Fraction(1, 5), Fraction(2, 3))
    assert str(point) == "(3/15, 10/15)"
    with pytest.raises(ValueError, match=r"Numerators"):
        RationalTorusPoint((5, 0), 5)
    with pytest.raises(ValueError, match=r"Denominator"):
        RationalTorusPoint((0, 0), 0)


def test_exact_distance():
    assert exact_torus_distance_squared(
        (Fraction(1, 10), Fraction(0)), (Fraction(9, 10), Fraction(1, 2))
    ) == Fraction(1, 25) + Fraction(1, 4)
