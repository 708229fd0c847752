from dataclasses import dataclass

import torch
from torch import Tensor

from ..util.pytorch import pad_columns

#: Box index of states whose fiber leaves ``[-R, R)^n``.
OVERFLOW = -1

#: Coverage fraction, excluding the overflow bucket, that the transitivity
#: diagnostic expects from its best start.
COVERAGE_THRESHOLD = 0.9


@dataclass
class GridSpec:
    """
    Finite partition of ``T^d x [-R, R)^n`` into boxes, with an overflow
    bucket for fibers outside the range.
    """

    level: int
    half_width: float
    base_subdivisions: int
    fiber_subdivisions: int

    def __init__(
        self,
        *,
        level: int = 2,
        half_width: float = 5.0,
        base_subdivisions: int = 64,
        fiber_subdivisions: int = 32,
    ):
        """
        :param level:
            Truncation level ``n``: the number of fiber coordinates that
            are partitioned.
        :param half_width:
            Fiber range half-width ``R``.
        :param base_subdivisions:
            Subdivisions per base dimension.
        :param fiber_subdivisions:
            Subdivisions per fiber coordinate.
        """
        if level < 0:
            raise ValueError(f"Grid level must be non-negative, was: {level}")
        if not half_width > 0:
            raise ValueError(f"Fiber half-width must be positive, was: {half_width}")
        if base_subdivisions < 1 or fiber_subdivisions < 1:
            raise ValueError(
                "Grid subdivisions must be positive, got "
                f"{base_subdivisions} (base) and {fiber_subdivisions} (fiber)"
            )
        self.level = level
        self.half_width = float(half_width)
        self.base_subdivisions = base_subdivisions
        self.fiber_subdivisions = fiber_subdivisions

    @classmethod
    def transitivity_diagnostic(cls) -> "GridSpec":
        """
        Grid of the transitivity diagnostic: truncation level 2, ``R = 3``,
        32 subdivisions per base dimension and 16 per fiber coordinate.
        The diagnostic runs up to ``10^7`` steps.
        """
        return cls(level=2, half_width=3.0, base_subdivisions=32, fiber_subdivisions=16)

    def base_boxes(self, dim: int) -> int:
        return self.base_subdivisions**dim

    def fiber_boxes(self) -> int:
        return self.fiber_subdivisions**self.level

    def num_boxes(self, dim: int) -> int:
        """
        Number of boxes, excluding the overflow bucket.
        """
        return self.base_boxes(dim) * self.fiber_boxes()

    def box_indices(self, base: Tensor, fiber: Tensor) -> Tensor:
        """
        Box index of each state. Fibers narrower than the grid level are
        zero-padded, since coordinates beyond a cocycle's support are zero.

        :param base:
            Base points.

            *Shape:* ``(batch_size, dim)``
        :param fiber:
            Fibers.

            *Shape:* ``(batch_size, width)``
        :returns:
            Box indices in ``[0, num_boxes)``, or :data:`OVERFLOW`.

            *Shape:* ``(batch_size,)``
        """
        base_cells = (base * self.base_subdivisions).floor().long()
        base_cells = base_cells.clamp(0, self.base_subdivisions - 1)
        index = torch.zeros(base.size(0), dtype=torch.long, device=base.device)
        for d in range(base.size(1)):
            index = index * self.base_subdivisions + base_cells[:, d]

        if self.level == 0:
            return index

        values = pad_columns(fiber, self.level)[:, : self.level]
        overflow = ((values < -self.half_width) | (values >= self.half_width)).any(-1)
        scaled = (values + self.half_width) * (
            self.fiber_subdivisions / (2.0 * self.half_width)
        )
        fiber_cells = scaled.floor().long().clamp(0, self.fiber_subdivisions - 1)
        for k in range(self.level):
            index = index * self.fiber_subdivisions + fiber_cells[:, k]
        return torch.where(overflow, torch.full_like(index, OVERFLOW), index)

    def fiber_box_indices(self, box_indices: Tensor) -> Tensor:
        """
        Fiber component of box indices (the "column" of a box above the
        base). Overflow indices are passed through.
        """
        return torch.where(
            box_indices == OVERFLOW,
            box_indices,
            box_indices % self.fiber_boxes(),
        )
