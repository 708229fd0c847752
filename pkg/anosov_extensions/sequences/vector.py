import math
from dataclasses import dataclass
from numbers import Real
from typing import Sequence, Tuple

import torch
from torch import Tensor

from ..util.pytorch import DTYPE


@dataclass(frozen=True)
class SeqVector:
    """
    Finitely supported element of the sequence space ``R^ω``. Coordinates
    are numbered from one; coordinates beyond the stored values are zero.

    Trailing zeros are trimmed, so equal vectors have equal representations.

    :param values:
        Coordinates ``1..k``.
    """

    values: Tuple[Real, ...] = ()

    def __post_init__(self):
        values = tuple(self.values)
        end = len(values)
        while end > 0 and values[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "values", values[:end])

    @classmethod
    def zeros(cls) -> "SeqVector":
        return cls(())

    @classmethod
    def from_tensor(cls, values: Tensor) -> "SeqVector":
        """
        Construct a vector from a one-dimensional tensor.
        """
        return cls(tuple(values.tolist()))

    @property
    def support(self) -> int:
        """
        Index of the last nonzero coordinate (zero for the zero vector).
        """
        return len(self.values)

    def coordinate(self, i: int) -> Real:
        """
        Coordinate ``i`` (one-based).
        """
        if i < 1:
            raise ValueError(f"Coordinates are numbered from 1, got: {i}")
        return self.values[i - 1] if i <= len(self.values) else 0

    def padded(self, level: int) -> Tuple[Real, ...]:
        """
        The first ``level`` coordinates, padded with zeros.
        """
        return tuple(self.coordinate(i) for i in range(1, level + 1))

    def norm(self, level: int) -> float:
        """
        Euclidean norm of the first ``level`` coordinates.
        """
        return math.sqrt(sum(float(v) ** 2 for v in self.padded(level)))

    def to_tensor(self, level: int) -> Tensor:
        """
        The first ``level`` coordinates as a ``float64`` tensor.

        *Shape:* ``(level,)``
        """
        return torch.tensor([float(v) for v in self.padded(level)], dtype=DTYPE)

    def __add__(self, other: "SeqVector") -> "SeqVector":
        width = max(self.support, other.support)
        return SeqVector(
            tuple(a + b for a, b in zip(self.padded(width), other.padded(width)))
        )

    def __sub__(self, other: "SeqVector") -> "SeqVector":
        width = max(self.support, other.support)
        return SeqVector(
            tuple(a - b for a, b in zip(self.padded(width), other.padded(width)))
        )

    def __neg__(self) -> "SeqVector":
        return SeqVector(tuple(-v for v in self.values))

    def __mul__(self, scalar: Real) -> "SeqVector":
        return SeqVector(tuple(scalar * v for v in self.values))

    __rmul__ = __mul__


def product_metric(a: SeqVector, b: SeqVector) -> float:
    """
    The product metric ``Σ_n 2^{-n} |a_n - b_n| / (1 + |a_n - b_n|)`` on ``R^ω``.
    Since both vectors are finitely supported, the finite sum is the exact
    value of the series.

    :param a:
        First vector.
    :param b:
        Second vector.
    :returns:
        The distance, in ``[0, 1)``.
    """
    width = max(a.support, b.support)
    total = 0.0
    for n, (x, y) in enumerate(zip(a.padded(width), b.padded(width)), start=1):
        delta = abs(float(x) - float(y))
        total += math.ldexp(delta / (1.0 + delta), -n)
    return total


def product_metric_batch(a: Tensor, b: Tensor) -> Tensor:
    """
    Product metric between batches of vectors of equal width.

    :param a:
        First vectors.

        *Shape:* ``(..., width)``
    :param b:
        Second vectors.

        *Shape:* ``(..., width)``
    :returns:
        Distances.

        *Shape:* ``(...)``
    """
    if a.size(-1) != b.size(-1):
        raise ValueError(
            f"Vectors must have equal width, got {a.size(-1)} and {b.size(-1)}"
        )
    delta = (a - b).abs()
    weights = torch.pow(
        torch.tensor(0.5, dtype=DTYPE),
        torch.arange(1, a.size(-1) + 1, dtype=DTYPE),
    )
    return (weights * delta / (1.0 + delta)).sum(-1)


def truncate(a: SeqVector, n: int) -> SeqVector:
    """
    The projection ``π_n``: keep coordinates ``1..n`` and zero the rest.

    :param a:
        Vector to truncate.
    :param n:
        Truncation level, non-negative.
    :returns:
        The truncated vector.
    """
    if n < 0:
        raise ValueError(f"Truncation level must be non-negative, was: {n}")
    return SeqVector(a.values[:n])


def truncation_tail_bound(n: int) -> float:
    """
    ``Σ_{i > n} 2^{-i} = 2^{-n}``, the largest possible product-metric
    distance between a vector and its truncation at level ``n``.
    """
    if n < 0:
        raise ValueError(f"Truncation level must be non-negative, was: {n}")
    return math.ldexp(1.0, -n)


def as_seqvector(values: Sequence[Real]) -> SeqVector:
    return SeqVector(tuple(values))
