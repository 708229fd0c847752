import csv
import io
import json

import pytest

from anosov_extensions.experiment import ExperimentConfig, cli_dispatch, parse_matrix
from anosov_extensions.experiment.cli import (
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_USAGE,
    _build_parser,
    _load_config,
)
from anosov_extensions.util.serde import read_csv, read_json, write_json

from ..util import make_tempdir


def _csv_rows(text: str):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_matrix():
    assert parse_matrix("2,1;1,1") == ((2, 1), (1, 1))
    assert parse_matrix("0,1,0;0,0,1;1,1,0") == ((0, 1, 0), (0, 0, 1), (1, 1, 0))


def test_validate_map_accepts_cat_map(capsys):
    assert cli_dispatch(["validate-map"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["accepted"]
    assert data["determinant"] == 1
    assert data["reason"] is None


def test_validate_map_rejects_identity(capsys):
    assert cli_dispatch(["validate-map", "--matrix", "1,0;0,1"]) == EXIT_REJECTED
    captured = capsys.readouterr()
    assert json.loads(captured.out)["reason"] == "unit-eigenvalue"
    assert "eigenvalue" in captured.err
    assert "unit circle" in captured.err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["validate-map", "--bogus"],
        ["validate-map", "--matrix", "2,x;1,1"],
        ["periodic-points"],
        ["periodic-points", "--n", "0"],
        ["simulate", "--cocycle", "f.json", "--zero-cocycle"],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli_dispatch(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_help(capsys):
    assert cli_dispatch(["--help"]) == EXIT_OK
    assert "periodic-points" in capsys.readouterr().out


def test_periodic_points(capsys):
    assert cli_dispatch(["periodic-points", "--n", "2", "--oracle"]) == EXIT_OK
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 5
    assert list(rows[0]) == ["point_id", "orbit_id", "period", "x1", "x2"]
    assert sorted(int(row["period"]) for row in rows) == [1, 2, 2, 2, 2]
    assert {row["x1"] for row in rows if row["period"] == "1"} == {"0/1"}


def test_periodic_points_writes_csv(capsys):
    with make_tempdir() as d:
        argv = ["periodic-points", "--n", "3", "--output", str(d)]
        assert cli_dispatch(argv) == EXIT_OK
        rows = read_csv(d / "periodic_points_n3.csv")
    assert len(rows) == 16
    assert len(_csv_rows(capsys.readouterr().out)) == 16


def test_periodic_points_rejects_non_hyperbolic_map(capsys):
    argv = ["periodic-points", "--n", "2", "--matrix", "1,1;0,1"]
    assert cli_dispatch(argv) == EXIT_REJECTED
    assert "error:" in capsys.readouterr().err


def test_weights(capsys):
    assert cli_dispatch(["weights", "--zero-cocycle", "--periods", "3", "--level", "2"]) == EXIT_OK
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 1 + 2 + 5
    assert list(rows[0]) == ["orbit_id", "period", "x1", "x2", "w1", "w2"]
    assert {row["w1"] for row in rows} == {"0.0"}


def test_decide(capsys):
    with make_tempdir() as d:
        points = d / "points.json"
        write_json(points, [[1, 1], ["-1/2", 1], [1, "-3/4"], [-1, -1]])
        argv = ["decide", "--points", str(points), "--output", str(d / "out")]
        assert cli_dispatch(argv) == EXIT_OK
        certificate = read_json(d / "out" / "certificate.json")
    assert json.loads(capsys.readouterr().out) == certificate
    assert certificate["verdict"] == "inseparable"
    assert certificate["method"] == "orthant-cover"


def test_decide_separable(capsys):
    with make_tempdir() as d:
        points = d / "points.json"
        write_json(points, [[1, 0], [-1, 0], [0, 1]])
        assert cli_dispatch(["decide", "--points", str(points)]) == EXIT_OK
    certificate = json.loads(capsys.readouterr().out)
    assert certificate["verdict"] == "separable"
    assert certificate["strict"] is False


def test_decide_bad_points_file(capsys):
    with make_tempdir() as d:
        points = d / "points.json"
        write_json(points, {"points": []})
        assert cli_dispatch(["decide", "--points", str(points)]) == EXIT_USAGE
        assert cli_dispatch(["decide", "--points", str(d / "missing.json")]) == EXIT_USAGE
        write_json(points, [])
        assert cli_dispatch(["decide", "--points", str(points)]) == EXIT_REJECTED
    assert "empty point set" in capsys.readouterr().err


def test_invalid_config_file(capsys):
    with make_tempdir() as d:
        config = d / "config.json"
        write_json(config, {"schema_version": 1})
        assert cli_dispatch(["validate-map", "--config", str(config)]) == EXIT_USAGE
    assert "'seed' is mandatory" in capsys.readouterr().err


def test_construct(capsys):
    with make_tempdir() as d:
        argv = ["construct", "--levels", "2", "--output", str(d)]
        assert cli_dispatch(argv) == EXIT_OK
        assert (d / "cocycle.json").exists()
        assert (d / "report.json").exists()
    report = json.loads(capsys.readouterr().out)
    assert report["exact"]["cocycle"]["data"]["num_coordinates"] == 2


def test_perturb_zero_cocycle(capsys):
    argv = ["perturb", "--zero-cocycle", "--n", "1", "--n", "3", "--seed", "4"]
    assert cli_dispatch(argv) == EXIT_OK
    levels = json.loads(capsys.readouterr().out)["sampled"]["perturbation"]["data"]["levels"]
    assert [level["n"] for level in levels] == [1, 3]
    assert all(level["truncation_certificate_holds"] for level in levels)


def test_close(capsys):
    argv = ["close", "--zero-cocycle", "--count", "5", "--seed", "1"]
    assert cli_dispatch(argv) == EXIT_OK
    closing = json.loads(capsys.readouterr().out)["statistical"]["closing"]
    assert closing["status"] == "ok"
    assert closing["data"]["trials"] == 5


def test_failed_stage_exit_code(capsys):
    argv = ["construct", "--matrix", "1,1;0,1"]
    assert cli_dispatch(argv) == EXIT_REJECTED
    captured = capsys.readouterr()
    assert json.loads(captured.out)["exact"]["map"]["status"] == "failed"
    assert "stage 'map' failed" in captured.err


def test_overrides_build_a_new_config():
    with make_tempdir() as d:
        path = d / "config.json"
        write_json(path, {"schema_version": 1, "seed": 3, "closing": {"count": 7, "c_max": 5.0}})
        argv = [
            "close",
            "--config",
            str(path),
            "--seed",
            "5",
            "--matrix",
            "0,1,0;0,0,1;1,1,0",
            "--count",
            "9",
            "--zero-cocycle",
        ]
        config = _load_config(_build_parser().parse_args(argv))
        assert ExperimentConfig.from_json(path).closing.count == 7
    assert config.seed == 5
    assert config.matrix == ((0, 1, 0), (0, 0, 1), (1, 1, 0))
    assert config.closing.count == 9
    assert config.closing.c_max == 5.0
    assert config.cocycle.kind == "zero"
    assert ExperimentConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()


def test_invalid_override_is_a_usage_error(capsys):
    argv = ["perturb", "--zero-cocycle", "--n", "-1"]
    assert cli_dispatch(argv) == EXIT_USAGE
    assert "non-negative" in capsys.readouterr().err
