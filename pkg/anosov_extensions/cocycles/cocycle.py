import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import torch
from torch import Tensor

from ..sequences.functional import LinearFunctional
from ..sequences.vector import SeqVector
from ..torus.automorphism import ToralAutomorphism, apply_batch
from ..torus.points import TorusPoint
from ..util.pytorch import DTYPE, pad_columns
from .functions import ZERO, Coboundary, CoordinateFunction, FunctionSum


@dataclass(frozen=True)
class Cocycle:
    """
    Hölder cocycle ``f: T^d -> R^ω`` with finitely many nonzero coordinates.
    Coordinate ``k`` (one-based) of ``f(x)`` is ``coordinates[k - 1](x)``;
    all later coordinates vanish.

    :param dim:
        Dimension of the base torus.
    :param coordinates:
        Coordinate functions.
    :param holder_exponent:
        Declared Hölder exponent in ``(0, 1]``. Every coordinate function
        is Lipschitz, so any exponent in the range is valid.
    """

    dim: int
    coordinates: Tuple[CoordinateFunction, ...]
    holder_exponent: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"Base dimension must be positive, was: {self.dim}")
        if not 0.0 < self.holder_exponent <= 1.0:
            raise ValueError(
                f"Hölder exponent must lie in (0, 1], was: {self.holder_exponent}"
            )
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        for k, coordinate in enumerate(self.coordinates, start=1):
            if coordinate.dim is not None and coordinate.dim != self.dim:
                raise ValueError(
                    f"Coordinate {k} is defined on dimension {coordinate.dim}, "
                    f"but the cocycle has base dimension {self.dim}"
                )

    @classmethod
    def zero(cls, dim: int) -> "Cocycle":
        return cls(dim, ())

    @property
    def num_coordinates(self) -> int:
        return len(self.coordinates)

    def coordinate(self, k: int) -> CoordinateFunction:
        """
        Coordinate function ``k`` (one-based).
        """
        return self.coordinates[k - 1]

    def evaluate_batch(self, points: Tensor) -> Tensor:
        """
        Evaluate all coordinates on a batch of points.

        :param points:
            Points with coordinates in ``[0, 1)``.

            *Shape:* ``(batch_size, dim)``
        :returns:
            Cocycle values.

            *Shape:* ``(batch_size, num_coordinates)``
        """
        if points.size(-1) != self.dim:
            raise ValueError(
                f"Cocycle has base dimension {self.dim}, but points have dimension {points.size(-1)}"
            )
        if not self.coordinates:
            return torch.zeros((points.size(0), 0), dtype=DTYPE, device=points.device)
        return torch.stack([c.evaluate_batch(points) for c in self.coordinates], dim=-1)

    def lipschitz_constants(self) -> Tuple[float, ...]:
        """
        Per-coordinate Lipschitz constants ``L_k``.
        """
        return tuple(c.lipschitz_constant() for c in self.coordinates)

    def lipschitz_constant(self) -> float:
        """
        Lipschitz constant ``sqrt(Σ_k L_k^2)`` of the cocycle as a map into
        Euclidean space at its support level.
        """
        return math.sqrt(sum(lip * lip for lip in self.lipschitz_constants()))

    def euclidean_holder_constant(self, n: int) -> float:
        """
        Lipschitz constant of the truncation ``π_n ∘ f`` with respect to the
        Euclidean metric on ``R^n``.
        """
        return math.sqrt(sum(lip * lip for lip in self.lipschitz_constants()[:n]))

    def product_lipschitz_constant(self) -> float:
        """
        Lipschitz constant ``Σ_k 2^{-k} L_k`` of the cocycle with respect to
        the product metric on ``R^ω``.
        """
        return sum(
            math.ldexp(lip, -k) for k, lip in enumerate(self.lipschitz_constants(), start=1)
        )

    def add_coboundary(
        self, transfer: Sequence[CoordinateFunction], automorphism: ToralAutomorphism
    ) -> "Cocycle":
        """
        Add the coboundary ``V ∘ T - V`` coordinatewise. The result is
        cohomologous to this cocycle and has the same periodic data.

        :param transfer:
            Transfer function coordinates ``V_k``.
        :param automorphism:
            The base map ``T``.
        :returns:
            The cohomologous cocycle.
        """
        width = max(self.num_coordinates, len(transfer))
        coordinates = []
        for k in range(width):
            own = self.coordinates[k] if k < self.num_coordinates else ZERO
            if k < len(transfer):
                coordinates.append(
                    FunctionSum((own, Coboundary(transfer[k], automorphism)))
                )
            else:
                coordinates.append(own)
        return Cocycle(self.dim, tuple(coordinates), self.holder_exponent)


def evaluate(f: Cocycle, x: TorusPoint) -> SeqVector:
    """
    Evaluate a cocycle at a point.

    :param f:
        The cocycle.
    :param x:
        Point of the base torus.
    :returns:
        ``f(x)``, with support at most the number of coordinates.
    """
    if x.dim != f.dim:
        raise ValueError(
            f"Cocycle has base dimension {f.dim}, but the point has dimension {x.dim}"
        )
    return SeqVector.from_tensor(f.evaluate_batch(x.to_tensor())[0])


def birkhoff_steps(
    f: Cocycle,
    automorphism: ToralAutomorphism,
    base: Tensor,
    fiber: Tensor,
) -> Iterator[Tuple[Tensor, Tensor]]:
    """
    The skew-product kernel ``(x, v) -> (A x mod 1, v + f(x))`` on batches.
    Birkhoff sums and skew-product orbits are both produced by this kernel,
    so they agree bit for bit.

    :param f:
        The cocycle.
    :param automorphism:
        The base map.
    :param base:
        Base points.

        *Shape:* ``(batch_size, dim)``
    :param fiber:
        Fiber values, at least ``f.num_coordinates`` wide.

        *Shape:* ``(batch_size, width)``
    :returns:
        Infinite iterator over the states after each step.
    """
    if fiber.size(-1) < f.num_coordinates:
        raise ValueError(
            f"Fiber width {fiber.size(-1)} is smaller than the number of cocycle coordinates ({f.num_coordinates})"
        )
    matrix = automorphism.float_matrix
    while True:
        base, fiber = skew_step(f, matrix, base, fiber)
        yield base, fiber


def skew_step(
    f: Cocycle, matrix: Tensor, base: Tensor, fiber: Tensor
) -> Tuple[Tensor, Tensor]:
    """
    One step ``(x, v) -> (A x mod 1, v + f(x))`` of the skew product on a
    batch.

    :param f:
        The cocycle.
    :param matrix:
        Float matrix of the base map.

        *Shape:* ``(dim, dim)``
    :param base:
        Base points.

        *Shape:* ``(batch_size, dim)``
    :param fiber:
        Fiber values, at least ``f.num_coordinates`` wide.

        *Shape:* ``(batch_size, width)``
    :returns:
        The next base points and fibers.
    """
    fiber = fiber + pad_columns(f.evaluate_batch(base), fiber.size(-1))
    return apply_batch(matrix, base), fiber


def birkhoff_sum(
    f: Cocycle, automorphism: ToralAutomorphism, x: TorusPoint, k: int
) -> SeqVector:
    """
    Birkhoff sum ``Σ_{i<k} f(A^i x)``, the fiber of ``T_f^k(x, 0)``.

    :param f:
        The cocycle.
    :param automorphism:
        The base map.
    :param x:
        Starting point.
    :param k:
        Number of terms, non-negative.
    :returns:
        The Birkhoff sum. ``k = 0`` gives the zero vector.
    """
    if k < 0:
        raise ValueError(f"Number of Birkhoff terms must be non-negative, was: {k}")
    if x.dim != f.dim:
        raise ValueError(
            f"Cocycle has base dimension {f.dim}, but the point has dimension {x.dim}"
        )
    fiber = torch.zeros((1, f.num_coordinates), dtype=DTYPE)
    steps = birkhoff_steps(f, automorphism, x.to_tensor(), fiber)
    for _ in range(k):
        _, fiber = next(steps)
    return SeqVector.from_tensor(fiber[0])


def orbit_sum(f: Cocycle, points: Tensor) -> SeqVector:
    """
    Sum of the cocycle over given orbit points, in order.

    :param f:
        The cocycle.
    :param points:
        Orbit points.

        *Shape:* ``(n, dim)``
    """
    values = f.evaluate_batch(points)
    total = torch.zeros(f.num_coordinates, dtype=DTYPE)
    for row in values:
        total = total + row
    return SeqVector.from_tensor(total)


def truncation_perturbation(f: Cocycle, n: int) -> Cocycle:
    """
    The perturbation ``π_n ∘ f``: coordinates beyond ``n`` become zero.
    It lies within ``2^{-n}`` of ``f`` in the sup distance but is never
    transitive when ``f`` has a nonzero coordinate beyond ``n``, see
    :func:`truncation_certificate`.

    :param f:
        The cocycle.
    :param n:
        Truncation level, non-negative.
    :returns:
        The truncated cocycle.
    """
    if n < 0:
        raise ValueError(f"Truncation level must be non-negative, was: {n}")
    return Cocycle(f.dim, f.coordinates[:n], f.holder_exponent)


def truncation_certificate(n: int) -> LinearFunctional:
    """
    The functional ``e_{n+1}`` that vanishes on all values (and therefore
    all periodic weights) of ``π_n ∘ f``.
    """
    return LinearFunctional.basis(n + 1)
