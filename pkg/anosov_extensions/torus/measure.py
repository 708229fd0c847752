from dataclasses import dataclass
from typing import Optional

import torch

from ..util.pytorch import DTYPE
from .automorphism import ToralAutomorphism, apply_batch


@dataclass(frozen=True)
class ChiSquareResult:
    """
    Chi-square statistic of a pushed-forward uniform sample.

    :param statistic:
        Pearson chi-square statistic over the bins.
    :param degrees_of_freedom:
        Number of bins minus one.
    :param samples:
        Sample size.
    """

    statistic: float
    degrees_of_freedom: int
    samples: int


def uniformity_chi_square(
    automorphism: ToralAutomorphism,
    *,
    samples: int = 100_000,
    bins_per_dim: int = 10,
    seed: int = 0,
    generator: Optional[torch.Generator] = None,
) -> ChiSquareResult:
    """
    Push a uniform sample forward under the automorphism and test the image
    for uniformity. Since ``|det A| = 1`` the automorphism preserves Lebesgue
    measure, so the statistic should be typical for a chi-square variable
    with ``bins_per_dim^d - 1`` degrees of freedom.

    :param automorphism:
        The automorphism.
    :param samples:
        Number of uniform samples.
    :param bins_per_dim:
        Number of bins per torus dimension.
    :param seed:
        Seed, used when no generator is given.
    :param generator:
        Random number generator.
    :returns:
        The chi-square result.
    """
    if samples < 1 or bins_per_dim < 1:
        raise ValueError(
            f"Sample size and bin count must be positive, were: {samples}, {bins_per_dim}"
        )
    if generator is None:
        generator = torch.Generator().manual_seed(seed)
    dim = automorphism.dim
    points = torch.rand((samples, dim), dtype=DTYPE, generator=generator)
    image = apply_batch(automorphism.float_matrix, points)

    cells = (image * bins_per_dim).long().clamp(max=bins_per_dim - 1)
    index = torch.zeros(samples, dtype=torch.long)
    for j in range(dim):
        index = index * bins_per_dim + cells[:, j]
    num_bins = bins_per_dim**dim
    observed = torch.bincount(index, minlength=num_bins).to(DTYPE)
    expected = samples / num_bins
    statistic = float(((observed - expected).square() / expected).sum())
    return ChiSquareResult(
        statistic=statistic, degrees_of_freedom=num_bins - 1, samples=samples
    )
