import json

import pytest

from anosov_extensions.experiment import (
    ClosingConfig,
    CocycleSource,
    ExperimentConfig,
    ExperimentRunner,
    PerturbationConfig,
    PeriodicConfig,
    Section,
    SimulationConfig,
    WeakMixingConfig,
    required_stages,
    run,
    stage_seed,
)
from anosov_extensions.skew import GridSpec, SearchConfig
from anosov_extensions.util.serde import read_json

from ..util import make_tempdir


def small_config(**kwargs) -> ExperimentConfig:
    settings = dict(
        seed=7,
        cocycle=CocycleSource(kind="construct", levels=3),
        periodic=PeriodicConfig(n_max=5),
        simulation=SimulationConfig(
            steps=200,
            starts=2,
            grid=GridSpec(level=1, half_width=2.0, base_subdivisions=4, fiber_subdivisions=4),
        ),
        search=SearchConfig(levels=(1,), budget=200, starts=2),
        weak_mixing=WeakMixingConfig(
            budget=100,
            pairs=2,
            grid=GridSpec(level=1, half_width=2.0, base_subdivisions=2, fiber_subdivisions=4),
        ),
        closing=ClosingConfig(count=10, n_range=(1, 10)),
        perturbation=PerturbationConfig(levels=(1, 2), points_per_dim=8),
    )
    settings.update(kwargs)
    return ExperimentConfig(**settings)


@pytest.fixture(scope="module")
def constructed_report():
    return run(small_config())


def test_required_stages():
    assert required_stages(["separation"]) == ("map", "cocycle", "periodic_data", "separation")
    assert required_stages(["closing", "map"]) == ("map", "cocycle", "closing")
    with pytest.raises(ValueError, match=r"Unknown stage 'plot'"):
        required_stages(["plot"])


def test_stage_seeds_are_distinct():
    config = small_config()
    seeds = {stage_seed(config, stage) for stage in ("coverage", "search", "closing")}
    assert len(seeds) == 3


def test_run_constructed_cocycle(constructed_report):
    report = constructed_report
    assert report.ok, report.failed
    assert [stage.name for stage in report.stages] == [
        "map",
        "cocycle",
        "periodic_data",
        "separation",
        "coverage",
        "search",
        "weak_mixing",
        "closing",
        "perturbation",
    ]

    assert report.stage("map").data["determinant"] == 1
    assert report.stage("cocycle").data["num_coordinates"] == 3
    for step in report.stage("cocycle").data["steps"]:
        assert step["lipschitz_constant"] <= step["lipschitz_bound"]
    lipschitz = report.stage("cocycle").data["lipschitz_constants"]
    assert len(lipschitz) == 3
    assert all(lip <= 2.0 ** -(k - 1) for k, lip in enumerate(lipschitz, start=1))

    periodic = report.stage("periodic_data").data
    assert periodic["orbits_per_period"] == {"1": 1, "2": 2, "3": 5, "4": 10, "5": 24}
    for entry in periodic["fixed_point_counts"]:
        assert entry["fixed_points"] == entry["determinant"]

    separation = report.stage("separation").data
    assert separation["inseparable_levels"] == [1, 2, 3]

    coverage = report.stage("coverage")
    assert coverage.section == Section.STATISTICAL
    assert coverage.data["coverage_threshold"] == 0.9
    assert coverage.data["meets_threshold"] == (
        coverage.data["best"]["fraction"] >= 0.9
    )

    closing = report.stage("closing").data
    assert closing["trials"] == 10
    assert closing["violations"] == 0
    assert closing["weight_violations"] == 0


def test_run_cocycle_stage():
    report = run(small_config(cocycle=CocycleSource(kind="zero")), stages=["cocycle"])
    assert report.ok, report.failed
    data = report.stage("cocycle").data
    assert data["num_coordinates"] == 0
    assert data["lipschitz_constants"] == []
    assert data["lipschitz_constant"] == 0.0


def test_run_sections(constructed_report):
    data = constructed_report.to_dict()
    assert data["schema_version"] == 1
    assert set(data["exact"]) == {"map", "cocycle", "periodic_data", "separation"}
    assert set(data["statistical"]) == {"coverage", "search", "weak_mixing", "closing"}
    assert set(data["sampled"]) == {"perturbation"}
    assert "metadata" not in data
    assert constructed_report.stage("perturbation").section == Section.SAMPLED


def test_run_perturbation(constructed_report):
    levels = constructed_report.stage("perturbation").data["levels"]
    assert [level["n"] for level in levels] == [1, 2]
    for level in levels:
        bound = level["tail_bound"]
        assert bound == 2.0 ** -level["n"]
        assert level["sup_distance"]["lower"] <= level["sup_distance"]["upper"] <= bound
        assert level["bounds_consistent"]
        assert level["truncation_certificate_holds"]
        assert level["certificate"]["verdict"] == "separable"
    assert levels[1]["certificate"]["functional"] == ["0/1", "0/1", "1/1"]


def test_run_zero_cocycle():
    report = run(small_config(cocycle=CocycleSource(kind="zero")))
    assert report.ok
    separation = report.stage("separation").data
    assert separation["inseparable_levels"] == []
    assert separation["levels"][0]["verdict"] == "separable"

    coverage = report.stage("coverage").data
    assert coverage["fiber_boxes_hit"] == 1

    for level in report.stage("perturbation").data["levels"]:
        assert level["sup_distance"]["upper"] == 0.0
        assert level["truncation_certificate_holds"]


def test_run_is_deterministic(constructed_report):
    again = run(small_config())
    assert again.to_dict() == constructed_report.to_dict()
    different = run(small_config(seed=8))
    assert (
        different.stage("closing").data != constructed_report.stage("closing").data
    )


def test_run_selected_stages():
    report = run(small_config(), stages=["separation"])
    assert [stage.name for stage in report.stages] == [
        "map",
        "cocycle",
        "periodic_data",
        "separation",
    ]
    assert report.ok


def test_run_rejects_non_hyperbolic_map():
    report = run(small_config(matrix=((1, 1), (0, 1))))
    assert not report.ok
    assert report.failed == list(
        ("map", "cocycle", "periodic_data", "separation", "coverage")
        + ("search", "weak_mixing", "closing", "perturbation")
    )
    assert report.stage("map").error.startswith("NonHyperbolicError")
    assert "Requires stage(s) that did not succeed: map" in report.stage("cocycle").error
    assert "periodic_data" in report.stage("separation").error


def test_run_isolates_failing_stages():
    config = small_config(cocycle=CocycleSource(kind="file", path="/nonexistent/cocycle.json"))
    report = ExperimentRunner(config)(["cocycle", "closing"])
    assert report.stage("map").ok
    assert not report.stage("cocycle").ok
    assert not report.stage("closing").ok
    assert report.failed == ["cocycle", "closing"]


def test_run_records_warnings():
    config = small_config(
        search=SearchConfig(levels=(1, 2), budget=10, starts=1),
        cocycle=CocycleSource(kind="zero"),
    )
    report = run(config, stages=["search"])
    search = report.stage("search")
    assert search.ok
    assert not search.data["is_complete"]
    assert any("exhausted" in w for w in search.data["warnings"])


def test_run_writes_outputs():
    with make_tempdir() as d:
        report = run(small_config(output_dir=str(d)))
        for name in (
            "report.json",
            "metadata.json",
            "cocycle.json",
            "periodic_data.csv",
            "coverage_curve.csv",
            "first_hits.csv",
            "closing_trials.csv",
        ):
            assert (d / name).exists(), name
        assert read_json(d / "report.json") == json.loads(json.dumps(report.to_dict()))
        metadata = read_json(d / "metadata.json")
        assert metadata["seed"] == 7
        assert set(metadata["wall_clock"]) == set(stage.name for stage in report.stages)


def test_run_loads_saved_cocycle():
    with make_tempdir() as d:
        run(small_config(output_dir=str(d)), stages=["cocycle"])
        config = small_config(cocycle=CocycleSource(kind="file", path=str(d / "cocycle.json")))
        report = run(config, stages=["separation"])
    assert report.ok
    assert report.stage("separation").data["inseparable_levels"] == [1, 2, 3]
