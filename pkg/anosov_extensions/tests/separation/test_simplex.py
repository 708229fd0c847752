from fractions import Fraction

import pytest

from anosov_extensions.separation import LPStatus, maximize, rank_and_kernel, rationalize
from anosov_extensions.separation.rational import rationalize_points


def test_rationalize_is_exact():
    assert rationalize(0.5) == Fraction(1, 2)
    assert rationalize(0.1) == Fraction(0.1)
    assert rationalize(0.1) != Fraction(1, 10)
    assert rationalize(3) == Fraction(3)


@pytest.mark.parametrize("value", [float("inf"), float("nan"), "one", None])
def test_rationalize_rejects(value):
    with pytest.raises(ValueError, match=r"exact rational"):
        rationalize(value)


def test_rationalize_points_validation():
    with pytest.raises(ValueError, match=r"empty point set"):
        rationalize_points([])
    with pytest.raises(ValueError, match=r"at least one coordinate"):
        rationalize_points([()])
    with pytest.raises(ValueError, match=r"Point 1 has dimension 3"):
        rationalize_points([(1, 2), (1, 2, 3)])


@pytest.mark.parametrize(
    "points,rank",
    [
        ([(1, 0, 0), (0, 1, 0)], 2),
        ([(1, 1), (2, 2)], 1),
        ([(0, 0)], 0),
        ([(1, 2), (3, 4), (5, 6)], 2),
    ],
)
def test_rank_and_kernel(points, rank):
    exact = rationalize_points(points)
    r, kernel = rank_and_kernel(exact)
    assert r == rank
    if rank == len(points[0]):
        assert kernel is None
    else:
        assert any(c != 0 for c in kernel)
        for p in exact:
            assert sum(a * b for a, b in zip(kernel, p)) == 0


def test_rank_and_kernel_vanishing_coordinate():
    _, kernel = rank_and_kernel(rationalize_points([(1, 0, 0), (0, 1, 0)]))
    assert kernel == (0, 0, 1)


def test_maximize_vertex():
    result = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert result.status == LPStatus.OPTIMAL
    assert result.value == Fraction(14, 5)
    assert result.x == (Fraction(8, 5), Fraction(6, 5))


def test_maximize_negative_right_hand_side():
    result = maximize([-1], [[-1]], [-2])
    assert result.status == LPStatus.OPTIMAL
    assert result.value == -2
    assert result.x == (2,)


def test_maximize_equality():
    result = maximize([-1, -1], a_eq=[[1, 1]], b_eq=[3])
    assert result.status == LPStatus.OPTIMAL
    assert result.value == -3


def test_maximize_redundant_equality():
    result = maximize([1, 0], a_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert result.status == LPStatus.OPTIMAL
    assert result.value == 1
    assert result.x == (1, 0)


def test_maximize_infeasible():
    result = maximize([1], [[1]], [-1])
    assert result.status == LPStatus.INFEASIBLE
    assert result.value is None
    assert result.x is None


def test_maximize_unbounded():
    result = maximize([1], [[-1]], [1])
    assert result.status == LPStatus.UNBOUNDED
    assert result.value is None


def test_maximize_degenerate_does_not_cycle():
    # Degenerate vertex at the origin where naive pivot rules cycle.
    result = maximize(
        [Fraction(3, 4), -20, Fraction(1, 2), -6],
        [
            [Fraction(1, 4), -8, -1, 9],
            [Fraction(1, 2), -12, Fraction(-1, 2), 3],
            [0, 0, 1, 0],
        ],
        [0, 0, 1],
    )
    assert result.status == LPStatus.OPTIMAL
    assert result.value == Fraction(5, 4)


def test_maximize_validation():
    with pytest.raises(ValueError, match=r"right-hand side"):
        maximize([1], [[1]], [])
    with pytest.raises(ValueError, match=r"must have 2 coefficients"):
        maximize([1, 1], [[1]], [1])
