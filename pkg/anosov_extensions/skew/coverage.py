import bisect
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import torch
from torch import Tensor

from ..util.serde import PathT, write_csv
from .grid import OVERFLOW, GridSpec
from .state import SkewState

# Largest number of first-hit cells (tracks x boxes) kept in memory.
MAX_TRACKED_CELLS = 2**26

_UNHIT = torch.iinfo(torch.long).max


@dataclass(frozen=True)
class CoverageReport:
    """
    Box coverage of one trajectory.

    :param total_boxes:
        Number of boxes, excluding the overflow bucket.
    :param first_hits:
        ``(step, box)`` pairs for every box that was hit, ordered by the
        step at which the box was first visited.
    :param trajectory_length:
        Number of steps; the trajectory has ``trajectory_length + 1``
        states.
    :param overflow_visits:
        Number of states that fell into the overflow bucket.
    :param overflow_first_hit:
        Step at which the overflow bucket was first visited.
    """

    total_boxes: int
    first_hits: Tuple[Tuple[int, int], ...]
    trajectory_length: int
    overflow_visits: int = 0
    overflow_first_hit: Optional[int] = None

    @property
    def boxes_hit(self) -> int:
        return len(self.first_hits)

    @property
    def fraction(self) -> float:
        """
        Fraction of boxes hit, not counting the overflow bucket.
        """
        return self.boxes_hit / self.total_boxes

    @property
    def first_hit_times(self) -> Tuple[int, ...]:
        return tuple(step for step, _ in self.first_hits)

    def fraction_at(self, steps: int) -> float:
        """
        Fraction of boxes hit within the first ``steps`` steps.
        """
        return bisect.bisect_right(self.first_hit_times, steps) / self.total_boxes

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_boxes": self.total_boxes,
            "boxes_hit": self.boxes_hit,
            "fraction": self.fraction,
            "trajectory_length": self.trajectory_length,
            "overflow_visits": self.overflow_visits,
            "overflow_first_hit": self.overflow_first_hit,
        }


class CoverageTracker:
    """
    Tracks first-hit times of boxes for a batch of trajectories. Only the
    first-hit table is retained, so trajectories can be streamed.
    """

    def __init__(self, total_boxes: int, num_tracks: int = 1, *, device=None):
        """
        Construct a tracker.

        :param total_boxes:
            Number of boxes, excluding the overflow bucket.
        :param num_tracks:
            Number of trajectories tracked independently.
        :param device:
            Device of the first-hit table.
        """
        if total_boxes < 1 or num_tracks < 1:
            raise ValueError(
                f"Tracker needs positive box and track counts, got {total_boxes} and {num_tracks}"
            )
        if total_boxes * num_tracks > MAX_TRACKED_CELLS:
            raise ValueError(
                f"Tracking {num_tracks} trajectories over {total_boxes} boxes exceeds "
                f"the limit of {MAX_TRACKED_CELLS} cells, use a coarser grid"
            )
        self.total_boxes = total_boxes
        self.num_tracks = num_tracks
        self.first_hit = torch.full(
            (num_tracks, total_boxes), _UNHIT, dtype=torch.long, device=device
        )
        self.hit_counts = torch.zeros(num_tracks, dtype=torch.long, device=device)
        self.overflow_visits = torch.zeros(num_tracks, dtype=torch.long, device=device)
        self.overflow_first_hit = torch.full(
            (num_tracks,), _UNHIT, dtype=torch.long, device=device
        )
        self.steps = torch.zeros(num_tracks, dtype=torch.long, device=device)

    def record(self, track_ids: Tensor, box_indices: Tensor, step: int):
        """
        Record the boxes visited by some trajectories at a step. Steps must
        be recorded in nondecreasing order.

        :param track_ids:
            Trajectories that visited a box.

            *Shape:* ``(batch_size,)``
        :param box_indices:
            Visited boxes, :data:`~.grid.OVERFLOW` for the overflow bucket.

            *Shape:* ``(batch_size,)``
        :param step:
            The step.
        """
        overflow = box_indices == OVERFLOW
        if overflow.any():
            overflowed = track_ids[overflow]
            self.overflow_visits.index_add_(
                0, overflowed, torch.ones_like(overflowed)
            )
            self.overflow_first_hit[overflowed] = torch.clamp(
                self.overflow_first_hit[overflowed], max=step
            )

        inside = overflow.logical_not()
        tracks = track_ids[inside]
        boxes = box_indices[inside]
        new = self.first_hit[tracks, boxes] == _UNHIT
        if new.any():
            # Two rows of one track can hit the same new box in one step.
            flat = tracks[new] * self.total_boxes + boxes[new]
            flat = torch.unique(flat)
            self.first_hit.view(-1)[flat] = step
            self.hit_counts.index_add_(
                0, flat // self.total_boxes, torch.ones_like(flat)
            )
        self.steps[track_ids] = step

    def all_hit(self, track_ids: Tensor) -> Tensor:
        """
        Whether every box has been hit, per trajectory.
        """
        return self.hit_counts[track_ids] == self.total_boxes

    def report(self, track: int = 0) -> CoverageReport:
        """
        Coverage report of one trajectory.
        """
        first_hit = self.first_hit[track]
        boxes = (first_hit != _UNHIT).nonzero().view(-1)
        steps = first_hit[boxes]
        order = torch.sort(steps, stable=True).indices
        overflow_first = int(self.overflow_first_hit[track])
        return CoverageReport(
            total_boxes=self.total_boxes,
            first_hits=tuple(
                zip(steps[order].tolist(), boxes[order].tolist())
            ),
            trajectory_length=int(self.steps[track]),
            overflow_visits=int(self.overflow_visits[track]),
            overflow_first_hit=None if overflow_first == _UNHIT else overflow_first,
        )


def coverage(trajectory: Iterable[SkewState], grid: GridSpec) -> CoverageReport:
    """
    Box coverage of a trajectory.

    :param trajectory:
        States of a trajectory in order, starting with the initial state at
        step zero, e.g. from :func:`~.simulator.skew_orbit`.
    :param grid:
        Partition of the skew-product space.
    :returns:
        The coverage report.
    """
    tracker: Optional[CoverageTracker] = None
    track = torch.zeros(1, dtype=torch.long)
    for step, state in enumerate(trajectory):
        if tracker is None:
            tracker = CoverageTracker(grid.num_boxes(state.base.dim))
        base = state.base.to_tensor()
        fiber = state.fiber.to_tensor(grid.level).unsqueeze(0)
        tracker.record(track, grid.box_indices(base, fiber), step)
    if tracker is None:
        raise ValueError("Cannot compute the coverage of an empty trajectory")
    return tracker.report()


def coverage_curve(
    report: CoverageReport, steps: Optional[Sequence[int]] = None
) -> List[Tuple[int, float]]:
    """
    Coverage fraction as a function of the trajectory length.

    :param report:
        A coverage report.
    :param steps:
        Trajectory lengths to evaluate. Defaults to the steps at which new
        boxes were hit.
    :returns:
        ``(steps, fraction)`` pairs, nondecreasing in both components.
    """
    if steps is None:
        steps = sorted(set(report.first_hit_times))
    return [(s, report.fraction_at(s)) for s in sorted(steps)]


def write_coverage_curve_csv(path: PathT, curve: Sequence[Tuple[int, float]]):
    write_csv(path, ["steps", "fraction"], ([s, repr(f)] for s, f in curve))


def write_first_hits_csv(path: PathT, report: CoverageReport):
    """
    Write the first-hit step of every hit box, for plotting.
    """
    write_csv(path, ["box", "first_hit"], ([box, step] for step, box in report.first_hits))
