import logging
import warnings
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import torch
from torch import Tensor
from torch.quasirandom import SobolEngine

from ..cocycles.cocycle import Cocycle
from ..torus.automorphism import ToralAutomorphism
from ..torus.points import TorusPoint
from ..util.pytorch import DTYPE
from .coverage import CoverageReport, CoverageTracker
from .grid import OVERFLOW, GridSpec
from .simulator import SkewProductSimulator
from .stop_conditions import (
    AllTargetsHitCondition,
    CompoundStopCondition,
    MaxStepsCondition,
)

logger = logging.getLogger(__name__)

# Warn when more than this fraction of product-system states overflow.
OVERFLOW_WARNING_FRACTION = 0.5


@dataclass
class SearchConfig:
    """
    Configuration of the multi-start transitive point search.

    :param levels:
        Truncation levels at which targets must be hit.
    :param target_half_width:
        Fiber half-width of the target boxes at every level.
    :param target_fiber_subdivisions:
        Target subdivisions per fiber coordinate.
    :param target_base_subdivisions:
        Target subdivisions per base dimension.
    :param starts:
        Number of start points, drawn from a scrambled Sobol sequence.
    :param budget:
        Maximum number of steps per start.
    :param seed:
        Seed of the Sobol scrambling.
    """

    levels: Tuple[int, ...] = (1, 2)
    target_half_width: float = 2.0
    target_fiber_subdivisions: int = 4
    target_base_subdivisions: int = 2
    starts: int = 16
    budget: int = 100_000
    seed: int = 0

    def __post_init__(self):
        self.levels = tuple(self.levels)
        if not self.levels or any(level < 1 for level in self.levels):
            raise ValueError(f"Search levels must be positive, got: {self.levels}")
        if self.starts < 1:
            raise ValueError(f"Number of starts must be positive, was: {self.starts}")
        if self.budget < 1:
            raise ValueError(f"Search budget must be positive, was: {self.budget}")

    def target_grid(self, level: int) -> GridSpec:
        return GridSpec(
            level=level,
            half_width=self.target_half_width,
            base_subdivisions=self.target_base_subdivisions,
            fiber_subdivisions=self.target_fiber_subdivisions,
        )


@dataclass(frozen=True)
class SearchResult:
    """
    Outcome of :func:`transitive_point_search`.

    :param candidate:
        Start point whose orbit hit the most targets.
    :param candidate_index:
        Index of the candidate among the starts.
    :param hits:
        Per level: the level, the targets hit by the candidate and the
        number of targets.
    :param steps:
        Steps taken by the candidate's orbit.
    :param is_complete:
        Whether the candidate hit every target at every level.
    :param start_hits:
        Total targets hit by each start.
    """

    candidate: TorusPoint
    candidate_index: int
    hits: Tuple[Tuple[int, int, int], ...]
    steps: int
    is_complete: bool
    start_hits: Tuple[int, ...]

    @property
    def misses(self) -> int:
        return sum(total - hit for _, hit, total in self.hits)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "candidate": list(self.candidate.coords),
            "candidate_index": self.candidate_index,
            "hits": [
                {"level": level, "hit": hit, "total": total}
                for level, hit, total in self.hits
            ],
            "steps": self.steps,
            "is_complete": self.is_complete,
            "start_hits": list(self.start_hits),
        }


def sobol_starts(dim: int, count: int, seed: int) -> Tensor:
    """
    Deterministic low-discrepancy start points.

    *Shape:* ``(count, dim)``
    """
    engine = SobolEngine(dimension=dim, scramble=True, seed=seed)
    return engine.draw(count, dtype=DTYPE)


def transitive_point_search(
    automorphism: ToralAutomorphism, f: Cocycle, config: SearchConfig
) -> SearchResult:
    """
    Search for a base point ``x`` such that the orbit of ``(x, 0)`` hits
    every target box at every requested truncation level.

    Every start runs until it has hit all targets or the budget is spent.
    Exhausting the budget is not an error: the best start is returned with
    ``is_complete`` unset.

    :param automorphism:
        The base map.
    :param f:
        The cocycle.
    :param config:
        Search configuration.
    :returns:
        The best candidate with per-level hit counts.
    """
    simulator = SkewProductSimulator(automorphism, f)
    dim = automorphism.dim
    starts = sobol_starts(dim, config.starts, config.seed)
    grids = [config.target_grid(level) for level in config.levels]
    trackers = [CoverageTracker(grid.num_boxes(dim), config.starts) for grid in grids]
    stop_condition = CompoundStopCondition(
        [MaxStepsCondition(config.budget), AllTargetsHitCondition(trackers)]
    )

    fiber = simulator.initial_fiber(config.starts, max(config.levels))
    for step, seq_ids, base, fibers in simulator.generate(
        base=starts, fiber=fiber, stop_condition=stop_condition
    ):
        for grid, tracker in zip(grids, trackers):
            tracker.record(seq_ids, grid.box_indices(base, fibers), step)

    totals = sum(tracker.hit_counts for tracker in trackers)
    assert isinstance(totals, Tensor)
    best = int(totals.argmax())
    hits = tuple(
        (level, int(tracker.hit_counts[best]), tracker.total_boxes)
        for level, tracker in zip(config.levels, trackers)
    )
    is_complete = all(hit == total for _, hit, total in hits)
    result = SearchResult(
        candidate=TorusPoint(tuple(starts[best].tolist())),
        candidate_index=best,
        hits=hits,
        steps=int(trackers[0].steps[best]),
        is_complete=is_complete,
        start_hits=tuple(totals.tolist()),
    )
    if not is_complete:
        warnings.warn(
            f"Search budget of {config.budget} steps exhausted, best candidate "
            f"misses {result.misses} targets"
        )
    logger.info("Best start %d hit %s", best, hits)
    return result


@dataclass(frozen=True)
class WeakMixingReport:
    """
    Coverage of the product system ``T_f x T_f`` for the best pair of
    starts.

    :param product:
        Coverage of the product grid.
    :param first:
        Coverage of the single-system grid by the first orbit of the pair.
    :param second:
        Coverage of the single-system grid by the second orbit.
    :param starts:
        The base points ``x`` and ``y`` of the pair.
    """

    product: CoverageReport
    first: CoverageReport
    second: CoverageReport
    starts: Tuple[TorusPoint, TorusPoint]

    @property
    def single_fraction(self) -> float:
        return min(self.first.fraction, self.second.fraction)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "product": self.product.to_dict(),
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "starts": [list(x.coords) for x in self.starts],
        }


def weak_mixing_diagnostic(
    automorphism: ToralAutomorphism,
    f: Cocycle,
    grid: GridSpec,
    budget: int,
    *,
    pairs: int = 4,
    seed: int = 0,
) -> WeakMixingReport:
    """
    Simulate ``T_f x T_f`` from ``((x, 0), (y, 0))`` for several pairs of
    start points and report the coverage of the product grid for the best
    pair. A product box is a pair of single-system boxes.

    :param automorphism:
        The base map.
    :param f:
        The cocycle.
    :param grid:
        Single-system grid; the product grid has its square number of boxes.
    :param budget:
        Number of steps.
    :param pairs:
        Number of start pairs, drawn from a Sobol sequence in ``T^{2d}``.
    :param seed:
        Seed of the Sobol scrambling.
    :returns:
        The report for the pair with the largest product coverage.
    """
    if budget < 0:
        raise ValueError(f"Budget must be non-negative, was: {budget}")
    if pairs < 1:
        raise ValueError(f"Number of pairs must be positive, was: {pairs}")
    dim = automorphism.dim
    single_boxes = grid.num_boxes(dim)
    product = CoverageTracker(single_boxes * single_boxes, pairs)
    singles = CoverageTracker(single_boxes, 2 * pairs)

    points = sobol_starts(2 * dim, pairs, seed)
    starts = torch.cat([points[:, :dim], points[:, dim:]], dim=0)
    simulator = SkewProductSimulator(automorphism, f)
    fiber = simulator.initial_fiber(2 * pairs, grid.level)
    for step, seq_ids, base, fibers in simulator.generate(
        base=starts, fiber=fiber, stop_condition=MaxStepsCondition(budget)
    ):
        boxes = grid.box_indices(base, fibers)
        singles.record(seq_ids, boxes, step)
        product.record(
            torch.arange(pairs), _product_boxes(boxes, pairs, single_boxes), step
        )

    reports = [product.report(i) for i in range(pairs)]
    best = max(range(pairs), key=lambda i: (reports[i].boxes_hit, -i))
    report = WeakMixingReport(
        product=reports[best],
        first=singles.report(best),
        second=singles.report(pairs + best),
        starts=(
            TorusPoint(tuple(starts[best].tolist())),
            TorusPoint(tuple(starts[pairs + best].tolist())),
        ),
    )
    states = report.product.trajectory_length + 1
    if report.product.overflow_visits > OVERFLOW_WARNING_FRACTION * states:
        warnings.warn(
            f"{report.product.overflow_visits} of {states} product states left the "
            f"fiber range, consider a larger half-width than {grid.half_width}"
        )
    return report


def _product_boxes(boxes: Tensor, pairs: int, single_boxes: int) -> Tensor:
    first, second = boxes[:pairs], boxes[pairs:]
    overflow = (first == OVERFLOW) | (second == OVERFLOW)
    index = first * single_boxes + second
    return torch.where(overflow, torch.full_like(index, OVERFLOW), index)
