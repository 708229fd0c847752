from typing import Iterable, Optional, Sequence

import torch
from torch import Tensor

# All floating-point dynamics run in double precision.
DTYPE = torch.float64


def float_tensor(values: Iterable[float], *, device: Optional[torch.device] = None):
    """
    Convert a flat sequence of numbers (floats, ints or fractions) to a
    one-dimensional ``float64`` tensor.

    :param values:
        Values to convert.
    :param device:
        Device on which the tensor is placed.
    :returns:
        The tensor.

        *Shape:* ``(len(values),)``
    """
    return torch.tensor([float(v) for v in values], dtype=DTYPE, device=device)


def points_tensor(
    points: Sequence[Sequence[float]], dim: int, *, device: Optional[torch.device] = None
) -> Tensor:
    """
    Stack points into a batch tensor.

    :param points:
        Points, each with ``dim`` coordinates.
    :param dim:
        Expected dimension of every point.
    :param device:
        Device on which the tensor is placed.
    :returns:
        Batch of points.

        *Shape:* ``(len(points), dim)``
    """
    if len(points) == 0:
        return torch.zeros((0, dim), dtype=DTYPE, device=device)
    rows = [[float(c) for c in point] for point in points]
    for row in rows:
        if len(row) != dim:
            raise ValueError(
                f"Expected points of dimension {dim}, but got a point of dimension {len(row)}"
            )
    return torch.tensor(rows, dtype=DTYPE, device=device)


def pad_columns(tensor: Tensor, width: int) -> Tensor:
    """
    Right-pad the last dimension of a tensor with zeros up to ``width``.
    Tensors that are already wide enough are returned unchanged.
    """
    missing = width - tensor.size(-1)
    if missing <= 0:
        return tensor
    padding = torch.zeros(
        tensor.shape[:-1] + (missing,), dtype=tensor.dtype, device=tensor.device
    )
    return torch.cat([tensor, padding], dim=-1)
