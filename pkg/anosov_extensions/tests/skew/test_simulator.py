import pytest
import torch

from anosov_extensions.cocycles import (
    Cocycle,
    Constant,
    TrigPoly,
    birkhoff_sum,
    truncation_perturbation,
)
from anosov_extensions.sequences import SeqVector, truncate
from anosov_extensions.skew import (
    AllTargetsHitCondition,
    CompoundStopCondition,
    CoverageTracker,
    GridSpec,
    MaxStepsCondition,
    SkewProductSimulator,
    SkewState,
    coverage,
    skew_orbit,
    write_coverage_curve_csv,
    write_first_hits_csv,
)
from anosov_extensions.skew.coverage import coverage_curve
from anosov_extensions.torus import TorusPoint
from anosov_extensions.util.pytorch import DTYPE
from anosov_extensions.util.serde import read_csv

from ..util import make_tempdir


@pytest.fixture
def trig_cocycle():
    return Cocycle(
        2,
        (
            TrigPoly(((1, 0), (0, 1)), (0.5, 0.0), (0.0, 0.25)),
            TrigPoly(((1, 1),), (0.0,), (0.3,)),
            Constant(0.1),
        ),
    )


def test_max_steps_condition_validation():
    with pytest.raises(ValueError, match=r"non-negative"):
        MaxStepsCondition(-1)


def test_generate_steps(cat_map, trig_cocycle):
    simulator = SkewProductSimulator(cat_map, trig_cocycle)
    base = torch.tensor([[0.1, 0.2], [0.3, 0.4]], dtype=DTYPE)
    steps = []
    for step, seq_ids, states, fibers in simulator.generate(
        base=base, stop_condition=MaxStepsCondition(3)
    ):
        steps.append(step)
        assert seq_ids.tolist() == [0, 1]
        assert states.shape == (2, 2)
        assert fibers.shape == (2, 3)
    assert steps == [0, 1, 2, 3]


def test_generate_stops_when_all_targets_are_hit(cat_map, trig_cocycle):
    simulator = SkewProductSimulator(cat_map, trig_cocycle)
    grid = GridSpec(level=0, base_subdivisions=1)
    tracker = CoverageTracker(grid.num_boxes(2), 2)
    condition = CompoundStopCondition(
        [MaxStepsCondition(100), AllTargetsHitCondition([tracker])]
    )
    base = torch.tensor([[0.1, 0.2], [0.3, 0.4]], dtype=DTYPE)
    steps = []
    for step, seq_ids, states, fibers in simulator(base=base, stop_condition=condition):
        tracker.record(seq_ids, grid.box_indices(states, fibers), step)
        steps.append(step)
    assert steps == [0]


def test_generate_matches_single_orbits(cat_map, trig_cocycle):
    simulator = SkewProductSimulator(cat_map, trig_cocycle)
    starts = [(0.1, 0.2), (0.3, 0.4), (0.77, 0.05)]
    final = None
    for _, _, _, fibers in simulator.generate(
        base=torch.tensor(starts, dtype=DTYPE), stop_condition=MaxStepsCondition(20)
    ):
        final = fibers
    for i, x in enumerate(starts):
        *_, last = simulator.orbit(SkewState.from_point(TorusPoint(x)), 20)
        assert last.fiber == SeqVector.from_tensor(final[i])


def test_simulator_validation(cat_map, trig_cocycle):
    with pytest.raises(ValueError, match=r"base dimension 1"):
        SkewProductSimulator(cat_map, Cocycle(1, (Constant(1.0),)))
    simulator = SkewProductSimulator(cat_map, trig_cocycle)
    with pytest.raises(ValueError, match=r"dimension 3"):
        next(
            simulator.generate(
                base=torch.zeros((1, 3), dtype=DTYPE), stop_condition=MaxStepsCondition(1)
            )
        )
    with pytest.raises(ValueError, match=r"non-negative"):
        simulator.orbit(SkewState.from_point(TorusPoint((0.1, 0.2))), -1)
    with pytest.raises(ValueError, match=r"dimension 1"):
        simulator.orbit(SkewState.from_point(TorusPoint((0.1,))), 1)


@pytest.mark.parametrize("k", [0, 1, 7, 50])
def test_skew_orbit_matches_birkhoff_sum(cat_map, trig_cocycle, k):
    x = TorusPoint((0.123, 0.456))
    states = list(skew_orbit(cat_map, trig_cocycle, SkewState.from_point(x), k))
    assert len(states) == k + 1
    assert states[0].fiber == SeqVector.zeros()
    assert states[-1].fiber == birkhoff_sum(trig_cocycle, cat_map, x, k)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_truncation_commutes_with_skew_orbit(cat_map, trig_cocycle, n):
    start = SkewState.from_point(TorusPoint((0.31, 0.62)))
    truncated = truncation_perturbation(trig_cocycle, n)
    full = list(skew_orbit(cat_map, trig_cocycle, start, 30))
    projected = list(skew_orbit(cat_map, truncated, start, 30))
    for a, b in zip(full, projected):
        assert a.base == b.base
        assert truncate(a.fiber, n) == b.fiber


def test_skew_orbit_nonzero_start(cat_map, trig_cocycle):
    x = TorusPoint((0.2, 0.9))
    v = SeqVector((1.0, 0.0, -0.5, 0.0, 2.0))
    shifted = list(skew_orbit(cat_map, trig_cocycle, SkewState(base=x, fiber=v), 50))
    plain = list(skew_orbit(cat_map, trig_cocycle, SkewState.from_point(x), 50))
    assert len(shifted) == len(plain) == 51
    for a, b in zip(shifted, plain):
        assert a.base == b.base
        assert a.fiber.support == 5
        assert a.fiber.padded(5) == pytest.approx((b.fiber + v).padded(5), abs=1e-12)
    assert shifted[-1].fiber.coordinate(5) == 2.0


def test_zero_cocycle_keeps_fiber(cat_map):
    start = SkewState(base=TorusPoint((0.2, 0.9)), fiber=SeqVector((0.5,)))
    for state in skew_orbit(cat_map, Cocycle.zero(2), start, 10):
        assert state.fiber == SeqVector((0.5,))


def test_coverage_of_orbit(cat_map, trig_cocycle):
    grid = GridSpec(level=1, half_width=4.0, base_subdivisions=4, fiber_subdivisions=8)
    start = SkewState.from_point(TorusPoint((0.123, 0.456)))
    report = coverage(skew_orbit(cat_map, trig_cocycle, start, 500), grid)
    assert report.total_boxes == 128
    assert report.trajectory_length == 500
    assert report.first_hits[0][0] == 0
    assert list(report.first_hit_times) == sorted(report.first_hit_times)
    assert 0 < report.fraction <= 1

    curve = coverage_curve(report)
    assert [f for _, f in curve] == sorted(f for _, f in curve)
    assert curve[-1][1] == report.fraction

    with make_tempdir() as d:
        write_coverage_curve_csv(d / "curve.csv", curve)
        write_first_hits_csv(d / "hits.csv", report)
        rows = read_csv(d / "curve.csv")
        assert len(rows) == len(curve)
        assert float(rows[-1]["fraction"]) == report.fraction
        hits = read_csv(d / "hits.csv")
        assert len(hits) == report.boxes_hit
        assert list(hits[0]) == ["box", "first_hit"]


def test_coverage_rejects_empty_trajectory():
    with pytest.raises(ValueError, match=r"empty trajectory"):
        coverage([], GridSpec())


def test_simulator_coverage_matches_single_orbits(cat_map, trig_cocycle):
    grid = GridSpec(level=1, half_width=4.0, base_subdivisions=4, fiber_subdivisions=8)
    starts = torch.tensor([[0.1, 0.2], [0.3, 0.4]], dtype=DTYPE)
    reports = SkewProductSimulator(cat_map, trig_cocycle).coverage(starts, grid, 100)
    assert len(reports) == 2
    for report, x in zip(reports, starts.tolist()):
        start = SkewState.from_point(TorusPoint(tuple(x)))
        assert report == coverage(skew_orbit(cat_map, trig_cocycle, start, 100), grid)


def _fiber_columns(cat_map, f, grid, steps):
    starts = torch.tensor([[0.1234, 0.5678]], dtype=DTYPE)
    (report,) = SkewProductSimulator(cat_map, f).coverage(starts, grid, steps)
    boxes = torch.tensor([box for _, box in report.first_hits], dtype=torch.long)
    return report, set(grid.fiber_box_indices(boxes).tolist())


def test_zero_cocycle_stays_in_one_fiber_column(cat_map, trig_cocycle):
    grid = GridSpec(level=2, half_width=3.0, base_subdivisions=8, fiber_subdivisions=16)
    report, columns = _fiber_columns(cat_map, Cocycle.zero(2), grid, 10_000)
    assert len(columns) == 1
    assert report.fraction <= 1 / grid.fiber_boxes()
    _, columns = _fiber_columns(cat_map, trig_cocycle, grid, 10_000)
    assert len(columns) > 1


@pytest.mark.slow
def test_zero_cocycle_stays_in_one_fiber_column_long_run(cat_map):
    grid = GridSpec(level=2, half_width=3.0, base_subdivisions=32, fiber_subdivisions=16)
    report, columns = _fiber_columns(cat_map, Cocycle.zero(2), grid, 10_000_000)
    assert len(columns) == 1
    assert report.overflow_visits == 0
    assert report.fraction <= 1 / grid.fiber_boxes()
