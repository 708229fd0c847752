import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

import torch
from torch import Tensor

from ..util.pytorch import DTYPE


@dataclass(frozen=True)
class TorusPoint:
    """
    A point of the flat torus ``R^d / Z^d`` in its canonical representative.

    :param coords:
        Coordinates, each in ``[0, 1)``.
    """

    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        for c in coords:
            if not 0.0 <= c < 1.0:
                raise ValueError(
                    f"Torus coordinates must lie in [0, 1), but got: {coords}"
                )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_coords(cls, coords: Sequence[float]) -> "TorusPoint":
        """
        Construct a point from arbitrary real coordinates by reducing them
        modulo one.
        """
        return cls(tuple(_reduce_float(float(c)) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_tensor(self) -> Tensor:
        """
        The point as a batch of one.

        *Shape:* ``(1, dim)``
        """
        return torch.tensor([self.coords], dtype=DTYPE)


@dataclass(frozen=True)
class RationalTorusPoint:
    """
    Exact rational point of the torus. The denominator is shared by all
    coordinates and is not necessarily reduced, e.g. periodic points of
    ``A^n`` are stored with denominator ``|det(A^n - I)|``.

    :param numerators:
        Numerators, each in ``[0, denominator)``.
    :param denominator:
        Positive common denominator.
    """

    numerators: Tuple[int, ...]
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError(
                f"Denominator must be positive, but was: {self.denominator}"
            )
        for numerator in self.numerators:
            if not 0 <= numerator < self.denominator:
                raise ValueError(
                    f"Numerators must lie in [0, {self.denominator}), but got: {self.numerators}"
                )

    @classmethod
    def from_fractions(cls, coords: Sequence[Fraction]) -> "RationalTorusPoint":
        """
        Construct a point from exact rational coordinates, reduced modulo one,
        over their least common denominator.
        """
        reduced = [Fraction(c) % 1 for c in coords]
        denominator = 1
        for c in reduced:
            denominator = denominator * c.denominator // math.gcd(denominator, c.denominator)
        return cls(
            tuple(int(c * denominator) for c in reduced),
            denominator,
        )

    @property
    def dim(self) -> int:
        return len(self.numerators)

    def to_fractions(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(n, self.denominator) for n in self.numerators)

    def to_float(self) -> TorusPoint:
        """
        Nearest floating-point torus point. Rounding up to ``1.0`` is
        wrapped to ``0.0``.
        """
        return TorusPoint.from_coords(
            [float(Fraction(n, self.denominator)) for n in self.numerators]
        )

    def sort_key(self) -> Tuple[Fraction, ...]:
        """
        Key for the lexicographic order on coordinate values.
        """
        return self.to_fractions()

    def __str__(self) -> str:
        return "(" + ", ".join(f"{n}/{self.denominator}" for n in self.numerators) + ")"


PointT = Union[TorusPoint, RationalTorusPoint]


def torus_distance(x: TorusPoint, y: TorusPoint) -> float:
    """
    Flat distance between two torus points: the Euclidean distance between
    their closest lifts.

    :param x:
        First point.
    :param y:
        Second point.
    :returns:
        The distance, at most ``sqrt(d) / 2``.
    """
    if x.dim != y.dim:
        raise ValueError(
            f"Cannot compute distance between points of dimension {x.dim} and {y.dim}"
        )
    total = 0.0
    for a, b in zip(x.coords, y.coords):
        delta = abs(a - b)
        total += min(delta, 1.0 - delta) ** 2
    return math.sqrt(total)


def torus_distance_batch(x: Tensor, y: Tensor) -> Tensor:
    """
    Flat torus distances between batches of points (broadcasting).

    :param x:
        Points with coordinates in ``[0, 1)``.

        *Shape:* ``(..., dim)``
    :param y:
        Points with coordinates in ``[0, 1)``.

        *Shape:* ``(..., dim)``
    :returns:
        Distances.

        *Shape:* ``(...)``
    """
    delta = (x - y).abs()
    delta = torch.minimum(delta, 1.0 - delta)
    return delta.square().sum(-1).sqrt()


def exact_torus_distance_squared(
    x: Sequence[Fraction], y: Sequence[Fraction]
) -> Fraction:
    """
    Exact squared flat distance between rational points.
    """
    if len(x) != len(y):
        raise ValueError(
            f"Cannot compute distance between points of dimension {len(x)} and {len(y)}"
        )
    total = Fraction(0)
    for a, b in zip(x, y):
        delta = (Fraction(a) - Fraction(b)) % 1
        delta = min(delta, 1 - delta)
        total += delta * delta
    return total


def _reduce_float(c: float) -> float:
    r = c % 1.0
    # `c % 1.0` can round up to 1.0 for tiny negative inputs.
    return 0.0 if r >= 1.0 else r
