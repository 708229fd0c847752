from typing import Iterator, List, Optional, Tuple

import torch
from torch import Tensor

from ..cocycles.cocycle import Cocycle, skew_step
from ..sequences.vector import SeqVector
from ..torus.automorphism import ToralAutomorphism
from ..torus.points import TorusPoint
from ..util.pytorch import DTYPE, pad_columns
from .coverage import CoverageReport, CoverageTracker
from .grid import GridSpec
from .state import SkewBatchState, SkewState
from .stop_conditions import MaxStepsCondition, StopCondition


class SkewProductSimulator:
    """
    Simulates the skew product ``T_f(x, v) = (A x mod 1, v + f(x))`` on
    batches of trajectories.
    """

    automorphism: ToralAutomorphism
    cocycle: Cocycle

    def __init__(self, automorphism: ToralAutomorphism, cocycle: Cocycle):
        """
        Construct a simulator.

        :param automorphism:
            The base map.
        :param cocycle:
            The cocycle.
        """
        if automorphism.dim != cocycle.dim:
            raise ValueError(
                f"Cocycle has base dimension {cocycle.dim}, but the automorphism acts on dimension {automorphism.dim}"
            )
        self.automorphism = automorphism
        self.cocycle = cocycle

    @property
    def dim(self) -> int:
        return self.automorphism.dim

    def initial_fiber(self, batch_size: int, width: int = 0) -> Tensor:
        """
        Zero fibers wide enough for the cocycle.

        *Shape:* ``(batch_size, max(width, num_coordinates))``
        """
        return torch.zeros(
            (batch_size, max(width, self.cocycle.num_coordinates)), dtype=DTYPE
        )

    def step(self, base: Tensor, fiber: Tensor) -> Tuple[Tensor, Tensor]:
        """
        Advance a batch of states by one step.
        """
        return skew_step(self.cocycle, self.automorphism.float_matrix, base, fiber)

    def __call__(
        self,
        *,
        base: Tensor,
        fiber: Optional[Tensor] = None,
        stop_condition: StopCondition,
    ) -> Iterator[Tuple[int, Tensor, Tensor, Tensor]]:
        """
        Alias for :meth:`.generate`.
        """
        return self.generate(base=base, fiber=fiber, stop_condition=stop_condition)

    def generate(
        self,
        *,
        base: Tensor,
        fiber: Optional[Tensor] = None,
        stop_condition: StopCondition,
    ) -> Iterator[Tuple[int, Tensor, Tensor, Tensor]]:
        """
        Run a batch of trajectories until the stop condition completes them.

        The simulator returns an iterator over tuples. Each tuple contains:
         1. The step number, starting with ``0`` for the initial states.
         2. A tensor with trajectory identifiers.
         3. The base points of these trajectories.
         4. Their fibers.

        Trajectory identifiers are numbered ``0..batch`` and are necessary
        because some trajectories may stop earlier than others.

        :param base:
            Initial base points.

            *Shape:* ``(batch_size, dim)``
        :param fiber:
            Initial fibers, zero when not given.

            *Shape:* ``(batch_size, width)``
        :param stop_condition:
            Condition that completes trajectories.
        :returns:
            Iterator over the states of the running trajectories.
        """
        if base.size(-1) != self.dim:
            raise ValueError(
                f"Simulator acts on dimension {self.dim}, but points have dimension {base.size(-1)}"
            )
        if fiber is None:
            fiber = self.initial_fiber(base.size(0))
        elif fiber.size(-1) < self.cocycle.num_coordinates:
            fiber = pad_columns(fiber, self.cocycle.num_coordinates)

        state = SkewBatchState(base=base, fiber=fiber)
        yield 0, state.seq_ids, state.base, state.fiber
        state.remove_completed(stop_condition)

        while not state.is_finished:
            next_base, next_fiber = self.step(state.base, state.fiber)
            seq_ids, next_base, next_fiber = state.step(
                base=next_base, fiber=next_fiber, stop_condition=stop_condition
            )
            yield state.steps, seq_ids, next_base, next_fiber

    def orbit(self, start: SkewState, k: int) -> Iterator[SkewState]:
        """
        Stream the orbit of a single state. See :func:`skew_orbit`.
        """
        if k < 0:
            raise ValueError(f"Number of steps must be non-negative, was: {k}")
        if start.base.dim != self.dim:
            raise ValueError(
                f"Simulator acts on dimension {self.dim}, but the start has dimension {start.base.dim}"
            )
        return self._orbit(start, k)

    def _orbit(self, start: SkewState, k: int) -> Iterator[SkewState]:
        width = max(self.cocycle.num_coordinates, start.fiber.support)
        base = start.base.to_tensor()
        fiber = start.fiber.to_tensor(width).unsqueeze(0)
        yield start
        for _ in range(k):
            base, fiber = self.step(base, fiber)
            yield SkewState(
                base=TorusPoint(tuple(base[0].tolist())),
                fiber=SeqVector.from_tensor(fiber[0]),
            )

    def coverage(
        self, starts: Tensor, grid: GridSpec, steps: int
    ) -> List[CoverageReport]:
        """
        Coverage of the orbits of ``(x, 0)`` for a batch of base points.

        :param starts:
            Base points.

            *Shape:* ``(batch_size, dim)``
        :param grid:
            Partition of the skew-product space.
        :param steps:
            Trajectory length.
        :returns:
            One report per start.
        """
        tracker = CoverageTracker(grid.num_boxes(self.dim), starts.size(0))
        for step, seq_ids, base, fiber in self.generate(
            base=starts, stop_condition=MaxStepsCondition(steps)
        ):
            tracker.record(seq_ids, grid.box_indices(base, fiber), step)
        return [tracker.report(i) for i in range(starts.size(0))]


def skew_orbit(
    automorphism: ToralAutomorphism, f: Cocycle, start: SkewState, k: int
) -> Iterator[SkewState]:
    """
    Stream the skew-product orbit ``state_{i+1} = (A x_i mod 1, v_i + f(x_i))``.

    The fiber after ``k`` steps from ``(x, 0)`` equals
    :func:`~anosov_extensions.cocycles.birkhoff_sum` bit for bit, since both
    run the same kernel.

    :param automorphism:
        The base map.
    :param f:
        The cocycle.
    :param start:
        Initial state.
    :param k:
        Number of steps, non-negative.
    :returns:
        Iterator over the ``k + 1`` states, starting with ``start``.
    """
    return SkewProductSimulator(automorphism, f).orbit(start, k)
