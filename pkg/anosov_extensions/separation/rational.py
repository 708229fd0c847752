from fractions import Fraction
from numbers import Real
from typing import List, Optional, Sequence, Tuple

PointT = Tuple[Fraction, ...]


def rationalize(value: Real) -> Fraction:
    """
    Convert a number to an exact rational. Floats are converted from their
    binary representation without rounding, so decisions are made on the
    literal data.
    """
    try:
        return Fraction(value)
    except (OverflowError, TypeError, ValueError):
        raise ValueError(f"Cannot convert {value!r} to an exact rational")


def rationalize_points(points: Sequence[Sequence[Real]]) -> List[PointT]:
    """
    Convert points to exact rationals and check that they share one
    positive dimension.

    :param points:
        Non-empty list of points.
    :returns:
        The exact points.
    """
    if len(points) == 0:
        raise ValueError("Cannot decide separability of an empty point set")
    exact = [tuple(rationalize(c) for c in p) for p in points]
    dim = len(exact[0])
    if dim < 1:
        raise ValueError("Points must have at least one coordinate")
    for i, p in enumerate(exact):
        if len(p) != dim:
            raise ValueError(
                f"Point {i} has dimension {len(p)}, but point 0 has dimension {dim}"
            )
    return exact


def inner(v: Sequence[Fraction], p: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(v, p)), Fraction(0))


def rank_and_kernel(points: Sequence[PointT]) -> Tuple[int, Optional[PointT]]:
    """
    Exact rank of the matrix whose rows are the points, together with a
    nonzero vector orthogonal to all points when the rank is deficient.

    The kernel vector is built from the last free column of the reduced row
    echelon form, so a coordinate that vanishes on all points yields the
    corresponding coordinate vector.

    :param points:
        Points of equal dimension ``n``.
    :returns:
        The rank and, if it is below ``n``, a kernel vector.
    """
    dim = len(points[0])
    rows = [list(p) for p in points]
    pivot_columns: List[int] = []
    r = 0
    for col in range(dim):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = rows[r][col]
        rows[r] = [c / scale for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivot_columns.append(col)
        r += 1
        if r == len(rows):
            break

    rank = len(pivot_columns)
    if rank == dim:
        return rank, None

    free = max(col for col in range(dim) if col not in pivot_columns)
    kernel = [Fraction(0)] * dim
    kernel[free] = Fraction(1)
    for row, col in enumerate(pivot_columns):
        kernel[col] = -rows[row][free]
    return rank, tuple(kernel)
