import pytest

from anosov_extensions.experiment import ConfigError, ExperimentConfig
from anosov_extensions.experiment.config import CAT_MAP, CocycleSource, PerturbationConfig
from anosov_extensions.skew import GridSpec
from anosov_extensions.util.serde import write_json

from ..util import make_tempdir


def test_config_defaults():
    config = ExperimentConfig(seed=1)
    assert config.matrix == CAT_MAP
    assert config.cocycle.kind == "construct"
    assert config.search.budget == 10_000
    assert config.search.starts == 8
    assert config.simulation.grid == GridSpec.transitivity_diagnostic()
    assert config.simulation.grid.level == 2
    assert config.simulation.grid.half_width == 3.0
    assert config.output_dir is None


def test_config_from_dict():
    config = ExperimentConfig.from_dict(
        {
            "schema_version": 1,
            "seed": 3,
            "matrix": [[3, 1], [2, 1]],
            "cocycle": {"kind": "zero"},
            "simulation": {"steps": 50, "grid": {"level": 2, "fiber_subdivisions": 4}},
            "search": {"levels": [1], "budget": 20},
            "closing": {"n_range": [1, 5]},
        }
    )
    assert config.seed == 3
    assert config.matrix == ((3, 1), (2, 1))
    assert config.cocycle.kind == "zero"
    assert config.simulation.steps == 50
    assert config.simulation.grid.level == 2
    assert config.simulation.grid.fiber_subdivisions == 4
    assert config.search.levels == (1,)
    assert config.search.starts == 8
    assert config.closing.n_range == (1, 5)


def test_config_dict_is_stable():
    config = ExperimentConfig(seed=5, perturbation=PerturbationConfig(levels=(3,)))
    data = config.to_dict()
    assert ExperimentConfig.from_dict(data).to_dict() == data


def test_config_reports_all_violations():
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_dict(
            {
                "schema_version": 2,
                "matrix": [[1, 2.5], [0, 1]],
                "colour": "blue",
                "cocycle": {"kind": "spline"},
                "closing": {"count": 0},
                "simulation": [],
            }
        )
    violations = excinfo.value.violations
    assert len(violations) == 7
    message = str(excinfo.value)
    assert "'schema_version' must be 1, was: 2" in message
    assert "'seed' is mandatory" in message
    assert "'matrix': Matrix entries must be integers" in message
    assert "Unknown configuration key: 'colour'" in message
    assert "'cocycle': Cocycle source must be" in message
    assert "'closing': Number of closing trials must be positive" in message
    assert "'simulation' must be an object" in message


@pytest.mark.parametrize("seed", [None, "1", 1.5, True])
def test_config_seed_must_be_an_integer(seed):
    data = {"schema_version": 1}
    if seed is not None:
        data["seed"] = seed
    with pytest.raises(ConfigError, match=r"'seed' is mandatory"):
        ExperimentConfig.from_dict(data)


def test_config_rejects_search_seed():
    with pytest.raises(ConfigError, match=r"derived from the experiment seed"):
        ExperimentConfig.from_dict({"schema_version": 1, "seed": 1, "search": {"seed": 4}})


def test_config_rejects_unknown_section_keys():
    with pytest.raises(ConfigError, match=r"'periodic':"):
        ExperimentConfig.from_dict(
            {"schema_version": 1, "seed": 1, "periodic": {"n_max": 3, "depth": 2}}
        )


def test_cocycle_source_validation():
    with pytest.raises(ValueError, match=r"needs a path"):
        CocycleSource(kind="file")
    with pytest.raises(ValueError, match=r"positive levels"):
        CocycleSource(levels=0)


def test_config_from_json():
    with make_tempdir() as d:
        path = d / "config.json"
        write_json(path, {"schema_version": 1, "seed": 9, "output_dir": "out"})
        config = ExperimentConfig.from_json(path)
        assert config.seed == 9
        assert config.output_dir == "out"

        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError, match=r"not valid JSON"):
            ExperimentConfig.from_json(path)

    with pytest.raises(ConfigError, match=r"JSON object"):
        ExperimentConfig.from_dict([1, 2])
