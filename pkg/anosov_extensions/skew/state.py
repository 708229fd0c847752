from dataclasses import dataclass

import torch
from torch import Tensor

from ..sequences.vector import SeqVector
from ..torus.points import TorusPoint
from .stop_conditions import StopCondition


@dataclass(frozen=True)
class SkewState:
    """
    A point ``(x, v)`` of the skew-product space ``T^d x R^ω``.

    :param base:
        Base point ``x``.
    :param fiber:
        Fiber value ``v``.
    """

    base: TorusPoint
    fiber: SeqVector

    @classmethod
    def from_point(cls, x: TorusPoint) -> "SkewState":
        """
        The state ``(x, 0)``.
        """
        return cls(base=x, fiber=SeqVector.zeros())


class SkewBatchState:
    """
    Stores the state of a batch of skew-product trajectories and tracks
    which trajectories are still running.
    """

    base: Tensor
    fiber: Tensor
    seq_ids: Tensor
    steps: int

    def __init__(self, *, base: Tensor, fiber: Tensor) -> None:
        """
        Construct a batch state.

        :param base:
            Initial base points.

            *Shape:* ``(batch_size, dim)``
        :param fiber:
            Initial fibers.

            *Shape:* ``(batch_size, width)``
        """
        assert base.size(0) == fiber.size(0), (
            f"Batch has {base.size(0)} base points, but {fiber.size(0)} fibers"
        )
        self.base = base
        self.fiber = fiber
        self.seq_ids = torch.arange(0, base.size(0), device=base.device)
        self.steps = 0

    @property
    def is_finished(self) -> bool:
        """
        Whether all trajectories have stopped.
        """
        return len(self.seq_ids) == 0

    def step(self, *, base: Tensor, fiber: Tensor, stop_condition: StopCondition):
        """
        Step the batch state.

        :param base:
            Base points after the step.

            *Shape:* ``(batch_size, dim)``
        :param fiber:
            Fibers after the step.

            *Shape:* ``(batch_size, width)``
        :param stop_condition:
            Condition that marks trajectories as completed.
        :returns:
            Trajectory identifiers, base points and fibers of all
            trajectories that took the step, including those that completed
            in it.
        """
        self.base = base
        self.fiber = fiber
        self.steps += 1
        seq_ids = self.seq_ids
        self.remove_completed(stop_condition)
        return seq_ids, base, fiber

    def remove_completed(self, stop_condition: StopCondition):
        """
        Remove the trajectories that the stop condition marks as completed.
        """
        completed = torch.zeros_like(self.seq_ids, dtype=torch.bool)
        stop_condition.update_completed(state=self, completed=completed)
        running = completed.logical_not()
        self.seq_ids = self.seq_ids[running]
        self.base = self.base[running]
        self.fiber = self.fiber[running]
