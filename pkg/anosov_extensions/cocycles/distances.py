import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import torch
from torch import Tensor

from ..sequences.vector import product_metric_batch
from ..torus.points import torus_distance_batch
from ..util.pytorch import DTYPE, pad_columns
from .cocycle import Cocycle
from .functions import ZERO, CoordinateFunction


@dataclass
class SampleSpec:
    """
    Sample of base points (and point pairs) on which cocycle distances are
    evaluated.

    :param points_per_dim:
        Size of the regular grid along each torus dimension.
    :param offsets:
        Pair offsets: every grid point ``x`` is paired with ``x + δ u`` for
        each offset ``δ`` and each direction ``u`` (coordinate axes and the
        main diagonal).
    :param random_points:
        Number of additional uniformly random points.
    :param seed:
        Seed for the random points.
    """

    points_per_dim: int
    offsets: Tuple[float, ...]
    random_points: int
    seed: int

    def __init__(
        self,
        *,
        points_per_dim: int = 16,
        offsets: Tuple[float, ...] = (0.1, 0.01, 0.001),
        random_points: int = 0,
        seed: int = 0,
    ):
        if points_per_dim < 1 and random_points < 1:
            raise ValueError("The sample must contain at least one point")
        for offset in offsets:
            if not 0.0 < offset < 0.5:
                raise ValueError(f"Pair offsets must lie in (0, 1/2), got: {offset}")
        self.points_per_dim = points_per_dim
        self.offsets = tuple(offsets)
        self.random_points = random_points
        self.seed = seed

    def points(self, dim: int) -> Tensor:
        """
        The sample points.

        *Shape:* ``(num_points, dim)``
        """
        parts = []
        if self.points_per_dim > 0:
            axis = [i / self.points_per_dim for i in range(self.points_per_dim)]
            parts.append(
                torch.tensor(list(itertools.product(axis, repeat=dim)), dtype=DTYPE)
            )
        if self.random_points > 0:
            generator = torch.Generator().manual_seed(self.seed)
            parts.append(
                torch.rand((self.random_points, dim), dtype=DTYPE, generator=generator)
            )
        return torch.cat(parts, dim=0)

    def pairs(self, dim: int) -> Tuple[Tensor, Tensor]:
        """
        Pairs of distinct sample points.

        :returns:
            Tensors ``x`` and ``y`` of equal shape ``(num_pairs, dim)``.
        """
        points = self.points(dim)
        directions = torch.eye(dim, dtype=DTYPE)
        diagonal = torch.ones((1, dim), dtype=DTYPE) / math.sqrt(dim)
        directions = torch.cat([directions, diagonal], dim=0)
        xs, ys = [], []
        for offset in self.offsets:
            for direction in directions:
                xs.append(points)
                ys.append(torch.remainder(points + offset * direction, 1.0))
        if not xs:
            raise ValueError("Hölder distances need at least one pair offset")
        x = torch.cat(xs, dim=0)
        y = torch.cat(ys, dim=0)
        y = torch.where(y >= 1.0, torch.zeros_like(y), y)
        keep = torus_distance_batch(x, y) > 0.0
        return x[keep], y[keep]


@dataclass(frozen=True)
class DistanceBounds:
    """
    Bounds on a distance between cocycles.

    :param lower:
        Lower bound from the sample: the distance is at least this value.
    :param upper:
        Certified upper bound from analytic Lipschitz and sup-norm bounds,
        ``None`` when unavailable.
    """

    lower: float
    upper: Optional[float]

    @property
    def is_consistent(self) -> bool:
        return self.upper is None or self.lower <= self.upper


def sup_distance(f: Cocycle, g: Cocycle, sample: SampleSpec) -> DistanceBounds:
    """
    Sup distance ``sup_x d(f(x), g(x))`` in the product metric.

    The certified upper bound is ``Σ_k 2^{-k} B_k / (1 + B_k)`` where ``B_k``
    bounds ``|f_k - g_k|``; identical coordinates contribute nothing. For a
    truncation ``π_n ∘ f`` this is below ``2^{-n}``.

    :param f:
        First cocycle.
    :param g:
        Second cocycle.
    :param sample:
        Sample points.
    :returns:
        Sampled lower bound and certified upper bound.
    """
    _check_same_base(f, g)
    points = sample.points(f.dim)
    if points.size(0) == 0:
        raise ValueError("Cannot estimate a sup distance from an empty sample")
    width = max(f.num_coordinates, g.num_coordinates)
    fx = pad_columns(f.evaluate_batch(points), width)
    gx = pad_columns(g.evaluate_batch(points), width)
    lower = float(product_metric_batch(fx, gx).max()) if width > 0 else 0.0

    upper = 0.0
    for k, (a, b) in enumerate(_coordinate_pairs(f, g), start=1):
        if a == b:
            continue
        bound = a.sup_bound() + b.sup_bound()
        upper += math.ldexp(bound / (1.0 + bound), -k)
    return DistanceBounds(lower=lower, upper=upper)


def holder_distance(
    f: Cocycle, g: Cocycle, alpha: float, sample: SampleSpec
) -> DistanceBounds:
    """
    Hölder distance
    ``d_α(f, g) = sup_{x≠y} d(f(x) - g(x), f(y) - g(y)) / d(x, y)^α``.

    The certified upper bound is ``Σ_k 2^{-k} L_k^α`` where ``L_k`` is a
    Lipschitz constant of ``f_k - g_k``, since
    ``min(1, L t) / t^α <= L^α`` for all ``t > 0``.

    :param f:
        First cocycle.
    :param g:
        Second cocycle.
    :param alpha:
        Hölder exponent in ``(0, 1]``.
    :param sample:
        Sample of point pairs.
    :returns:
        Sampled lower bound and certified upper bound.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"Hölder exponent must lie in (0, 1], was: {alpha}")
    _check_same_base(f, g)
    x, y = sample.pairs(f.dim)
    if x.size(0) == 0:
        raise ValueError("Cannot estimate a Hölder distance from an empty sample")
    width = max(f.num_coordinates, g.num_coordinates)
    if width > 0:
        hx = pad_columns(f.evaluate_batch(x), width) - pad_columns(g.evaluate_batch(x), width)
        hy = pad_columns(f.evaluate_batch(y), width) - pad_columns(g.evaluate_batch(y), width)
        ratios = product_metric_batch(hx, hy) / torus_distance_batch(x, y).pow(alpha)
        lower = float(ratios.max())
    else:
        lower = 0.0

    upper = 0.0
    for k, (a, b) in enumerate(_coordinate_pairs(f, g), start=1):
        if a == b:
            continue
        lipschitz = a.lipschitz_constant() + b.lipschitz_constant()
        upper += math.ldexp(lipschitz**alpha, -k)
    return DistanceBounds(lower=lower, upper=upper)


def _coordinate_pairs(f: Cocycle, g: Cocycle):
    width = max(f.num_coordinates, g.num_coordinates)
    for k in range(width):
        a: CoordinateFunction = f.coordinates[k] if k < f.num_coordinates else ZERO
        b: CoordinateFunction = g.coordinates[k] if k < g.num_coordinates else ZERO
        yield a, b


def _check_same_base(f: Cocycle, g: Cocycle):
    if f.dim != g.dim:
        raise ValueError(
            f"Cocycles have different base dimensions: {f.dim} and {g.dim}"
        )
