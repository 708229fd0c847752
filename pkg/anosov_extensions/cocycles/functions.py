import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

import torch
from torch import Tensor

from ..torus.automorphism import ToralAutomorphism, apply_batch
from ..torus.points import (
    RationalTorusPoint,
    TorusPoint,
    exact_torus_distance_squared,
    torus_distance_batch,
)
from ..util.pytorch import DTYPE


class CoordinateFunction(ABC):
    """
    A real-valued Lipschitz function on the torus, used as one coordinate
    of a cocycle. Every variant reports certified Lipschitz and sup-norm
    bounds with respect to the flat torus distance.
    """

    @property
    @abstractmethod
    def dim(self) -> Optional[int]:
        """
        Torus dimension the function is defined on, ``None`` when the
        function does not depend on the dimension.
        """
        raise NotImplementedError

    @abstractmethod
    def evaluate_batch(self, points: Tensor) -> Tensor:
        """
        Evaluate the function on a batch of points.

        :param points:
            Points with coordinates in ``[0, 1)``.

            *Shape:* ``(batch_size, dim)``
        :returns:
            Function values.

            *Shape:* ``(batch_size,)``
        """
        raise NotImplementedError

    @abstractmethod
    def lipschitz_constant(self) -> float:
        """
        Certified Lipschitz constant with respect to the torus distance.
        """
        raise NotImplementedError

    @abstractmethod
    def sup_bound(self) -> float:
        """
        Certified bound on the absolute value of the function.
        """
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:
        """
        Whether the function is identically zero by construction.
        """
        return self.sup_bound() == 0.0

    def __call__(self, x: TorusPoint) -> float:
        return float(self.evaluate_batch(x.to_tensor())[0])


@dataclass(frozen=True)
class Constant(CoordinateFunction):
    """
    Constant function.

    :param value:
        The constant.
    """

    value: float

    @property
    def dim(self) -> Optional[int]:
        return None

    def evaluate_batch(self, points: Tensor) -> Tensor:
        return torch.full(
            (points.size(0),), float(self.value), dtype=DTYPE, device=points.device
        )

    def lipschitz_constant(self) -> float:
        return 0.0

    def sup_bound(self) -> float:
        return abs(float(self.value))


@dataclass(frozen=True)
class TrigPoly(CoordinateFunction):
    """
    Real trigonometric polynomial
    ``Σ_k a_k cos(2π k·x) + b_k sin(2π k·x)``.

    :param frequencies:
        Integer frequency vectors ``k``.
    :param cosine:
        Cosine coefficients ``a_k``.
    :param sine:
        Sine coefficients ``b_k``.
    """

    frequencies: Tuple[Tuple[int, ...], ...]
    cosine: Tuple[float, ...]
    sine: Tuple[float, ...]

    def __post_init__(self):
        if not (len(self.frequencies) == len(self.cosine) == len(self.sine)):
            raise ValueError(
                "Trigonometric polynomial needs one cosine and one sine coefficient per frequency"
            )
        if len(self.frequencies) == 0:
            raise ValueError("Trigonometric polynomial needs at least one frequency")
        dims = {len(k) for k in self.frequencies}
        if len(dims) != 1:
            raise ValueError(f"Frequencies must share one dimension, got: {sorted(dims)}")
        for k in self.frequencies:
            if not all(isinstance(c, int) for c in k):
                raise ValueError(f"Frequencies must be integer vectors, got: {k}")
        object.__setattr__(self, "frequencies", tuple(tuple(k) for k in self.frequencies))
        object.__setattr__(self, "cosine", tuple(float(c) for c in self.cosine))
        object.__setattr__(self, "sine", tuple(float(c) for c in self.sine))

    @property
    def dim(self) -> Optional[int]:
        return len(self.frequencies[0])

    def evaluate_batch(self, points: Tensor) -> Tensor:
        freqs = torch.tensor(self.frequencies, dtype=DTYPE, device=points.device)
        # Column by column, so that rows do not depend on the batch size.
        phase = points[:, 0:1] * freqs[:, 0]
        for j in range(1, freqs.size(1)):
            phase = phase + points[:, j : j + 1] * freqs[:, j]
        phase = 2.0 * math.pi * phase
        cosine = torch.tensor(self.cosine, dtype=DTYPE, device=points.device)
        sine = torch.tensor(self.sine, dtype=DTYPE, device=points.device)
        return (phase.cos() * cosine + phase.sin() * sine).sum(-1)

    def lipschitz_constant(self) -> float:
        return sum(
            2.0 * math.pi * math.sqrt(sum(c * c for c in k)) * math.hypot(a, b)
            for k, a, b in zip(self.frequencies, self.cosine, self.sine)
        )

    def sup_bound(self) -> float:
        return sum(math.hypot(a, b) for a, b in zip(self.cosine, self.sine))


@dataclass(frozen=True)
class Bump:
    """
    Tent-shaped bump ``amplitude * max(0, 1 - dist(x, center) / radius)``.

    :param center:
        Center of the bump.
    :param radius:
        Support radius, in ``(0, 1/2)`` so that the support is a ball
        that does not wrap around the torus.
    :param amplitude:
        Value at the center.
    :param exact_center:
        Exact rational center when the bump sits on a rational point,
        used for exact support checks and serialization.
    """

    center: TorusPoint
    radius: float
    amplitude: float
    exact_center: Optional[RationalTorusPoint] = None

    def __post_init__(self):
        if not 0.0 < self.radius < 0.5:
            raise ValueError(f"Bump radius must lie in (0, 1/2), was: {self.radius}")
        if self.exact_center is not None and self.exact_center.dim != self.center.dim:
            raise ValueError("Exact and float centers must have the same dimension")

    @property
    def lipschitz_constant(self) -> float:
        return abs(self.amplitude) / self.radius

    def exact_center_fractions(self) -> Tuple[Fraction, ...]:
        if self.exact_center is not None:
            return self.exact_center.to_fractions()
        return tuple(Fraction(c) for c in self.center.coords)


@dataclass(frozen=True)
class BumpSum(CoordinateFunction):
    """
    Sum of tent bumps.

    :param bumps:
        The bumps. When their supports are pairwise disjoint the Lipschitz
        constant is the largest bump slope, otherwise the slopes add up.
    """

    bumps: Tuple[Bump, ...]

    def __post_init__(self):
        object.__setattr__(self, "bumps", tuple(self.bumps))
        dims = {bump.center.dim for bump in self.bumps}
        if len(dims) > 1:
            raise ValueError(f"Bump centers must share one dimension, got: {sorted(dims)}")

    @property
    def dim(self) -> Optional[int]:
        return self.bumps[0].center.dim if self.bumps else None

    @cached_property
    def _centers(self) -> Tensor:
        return torch.tensor([b.center.coords for b in self.bumps], dtype=DTYPE)

    @cached_property
    def _radii(self) -> Tensor:
        return torch.tensor([b.radius for b in self.bumps], dtype=DTYPE)

    @cached_property
    def _amplitudes(self) -> Tensor:
        return torch.tensor([b.amplitude for b in self.bumps], dtype=DTYPE)

    def evaluate_batch(self, points: Tensor) -> Tensor:
        if not self.bumps:
            return torch.zeros(points.size(0), dtype=DTYPE, device=points.device)
        dist = torus_distance_batch(points.unsqueeze(1), self._centers.unsqueeze(0))
        profile = torch.clamp(1.0 - dist / self._radii, min=0.0)
        return (profile * self._amplitudes).sum(-1)

    @cached_property
    def supports_disjoint(self) -> bool:
        """
        Whether the bump supports are pairwise disjoint, checked exactly on
        the (rational) centers and radii.
        """
        for i, a in enumerate(self.bumps):
            ca = a.exact_center_fractions()
            for b in self.bumps[i + 1 :]:
                reach = Fraction(a.radius) + Fraction(b.radius)
                if exact_torus_distance_squared(ca, b.exact_center_fractions()) < reach * reach:
                    return False
        return True

    def lipschitz_constant(self) -> float:
        if not self.bumps:
            return 0.0
        slopes = [bump.lipschitz_constant for bump in self.bumps]
        return max(slopes) if self.supports_disjoint else sum(slopes)

    def sup_bound(self) -> float:
        if not self.bumps:
            return 0.0
        heights = [abs(bump.amplitude) for bump in self.bumps]
        return max(heights) if self.supports_disjoint else sum(heights)


@dataclass(frozen=True)
class Coboundary(CoordinateFunction):
    """
    Coboundary ``V ∘ T - V`` of a transfer function ``V``. Adding a
    coboundary yields a cohomologous cocycle with the same periodic data.

    :param transfer:
        Transfer function ``V``.
    :param automorphism:
        The base map ``T``.
    """

    transfer: CoordinateFunction
    automorphism: ToralAutomorphism

    def __post_init__(self):
        if self.transfer.dim is not None and self.transfer.dim != self.automorphism.dim:
            raise ValueError(
                f"Transfer function has dimension {self.transfer.dim}, "
                f"but the automorphism acts on dimension {self.automorphism.dim}"
            )

    @property
    def dim(self) -> Optional[int]:
        return self.automorphism.dim

    def evaluate_batch(self, points: Tensor) -> Tensor:
        image = apply_batch(self.automorphism.float_matrix, points)
        return self.transfer.evaluate_batch(image) - self.transfer.evaluate_batch(points)

    def lipschitz_constant(self) -> float:
        # The Frobenius norm bounds the operator norm of A on closest lifts.
        frobenius = math.sqrt(sum(a * a for row in self.automorphism.matrix for a in row))
        return self.transfer.lipschitz_constant() * (frobenius + 1.0)

    def sup_bound(self) -> float:
        return 2.0 * self.transfer.sup_bound()


@dataclass(frozen=True)
class FunctionSum(CoordinateFunction):
    """
    Pointwise sum of coordinate functions.

    :param terms:
        Summands, at least one.
    """

    terms: Tuple[CoordinateFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("A function sum needs at least one term")
        dims = {t.dim for t in self.terms if t.dim is not None}
        if len(dims) > 1:
            raise ValueError(f"Summands must share one dimension, got: {sorted(dims)}")

    @property
    def dim(self) -> Optional[int]:
        dims = {t.dim for t in self.terms if t.dim is not None}
        return dims.pop() if dims else None

    def evaluate_batch(self, points: Tensor) -> Tensor:
        values = self.terms[0].evaluate_batch(points)
        for term in self.terms[1:]:
            values = values + term.evaluate_batch(points)
        return values

    def lipschitz_constant(self) -> float:
        return sum(t.lipschitz_constant() for t in self.terms)

    def sup_bound(self) -> float:
        return sum(t.sup_bound() for t in self.terms)


ZERO = Constant(0.0)
