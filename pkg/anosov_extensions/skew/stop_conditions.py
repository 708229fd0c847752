from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, List, Sequence

from torch import Tensor

if TYPE_CHECKING:
    from .coverage import CoverageTracker
    from .state import SkewBatchState


class StopCondition(ABC):
    """
    Base class for trajectory stop conditions.
    """

    @abstractmethod
    def update_completed(self, *, state: "SkewBatchState", completed: Tensor):
        """
        Update completed trajectories according to the stop condition.

        :param state:
            Batch state after the last step.
        :param completed:
            Output tensor marking which trajectories are completed.

            *Shape:* ``(batch_size,)``
        """
        ...


class CompoundStopCondition(List[StopCondition], StopCondition):
    """
    Sequentially apply multiple stop conditions.
    """

    def update_completed(self, *, state: "SkewBatchState", completed: Tensor):
        for condition in self:
            condition.update_completed(state=state, completed=completed)


class MaxStepsCondition(StopCondition):
    """
    Stop after a maximum number of steps.
    """

    def __init__(self, max_steps: int):
        """
        Construct the stop condition.

        :param max_steps:
            The maximum number of steps, at least 0.
        """
        if max_steps < 0:
            raise ValueError(f"Maximum number of steps must be non-negative, was: {max_steps}")
        self.max_steps = max_steps

    def update_completed(self, *, state: "SkewBatchState", completed: Tensor):
        if state.steps >= self.max_steps:
            completed |= True


class AllTargetsHitCondition(StopCondition):
    """
    Stop a trajectory once it has hit every box of every tracker. The
    trackers must be updated by the caller after every step, so the
    condition sees hits up to the previous step.
    """

    def __init__(self, trackers: Sequence["CoverageTracker"]):
        """
        Construct the stop condition.

        :param trackers:
            Trackers with one track per trajectory of the batch.
        """
        self.trackers = list(trackers)

    def update_completed(self, *, state: "SkewBatchState", completed: Tensor):
        if not self.trackers:
            return
        done = self.trackers[0].all_hit(state.seq_ids)
        for tracker in self.trackers[1:]:
            done &= tracker.all_hit(state.seq_ids)
        completed |= done
