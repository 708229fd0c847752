import pytest

from anosov_extensions.cocycles import (
    Bump,
    BumpSum,
    Cocycle,
    Constant,
    SampleSpec,
    TrigPoly,
    load_cocycle,
    periodic_data,
    save_cocycle,
    write_periodic_data_csv,
)
from anosov_extensions.cocycles.serde import cocycle_from_dict, cocycle_to_dict
from anosov_extensions.torus import TorusPoint
from anosov_extensions.util.serde import read_csv, read_json

from ..util import make_tempdir, torch_assertclose


def test_save_and_load_constructed_cocycle(constructed_cocycle):
    with make_tempdir() as d:
        save_cocycle(d / "cocycle.json", constructed_cocycle)
        data = read_json(d / "cocycle.json")
        loaded = load_cocycle(d / "cocycle.json")

    assert data["schema_version"] == 1
    assert "/" in data["coordinates"][0]["bumps"][0]["center"][0]
    assert loaded.num_coordinates == constructed_cocycle.num_coordinates
    assert loaded.lipschitz_constants() == constructed_cocycle.lipschitz_constants()
    points = SampleSpec(points_per_dim=10).points(2)
    torch_assertclose(
        loaded.evaluate_batch(points), constructed_cocycle.evaluate_batch(points), atol=0, rtol=0
    )


def test_cocycle_descriptor_with_coboundary(cat_map):
    f = Cocycle(2, (Constant(0.5), TrigPoly(((1, 2),), (0.25,), (-0.5,))))
    g = f.add_coboundary(
        (BumpSum((Bump(TorusPoint((0.5, 0.25)), 0.1, 0.3),)),), cat_map
    )
    restored = cocycle_from_dict(cocycle_to_dict(g))
    points = SampleSpec(points_per_dim=7).points(2)
    torch_assertclose(restored.evaluate_batch(points), g.evaluate_batch(points))


def test_unsupported_schema_version():
    with pytest.raises(ValueError, match=r"schema version"):
        cocycle_from_dict({"schema_version": 2, "dim": 2, "coordinates": []})


def test_write_periodic_data_csv(cat_map, constructed_cocycle):
    data = periodic_data(constructed_cocycle, cat_map, 3)
    with make_tempdir() as d:
        write_periodic_data_csv(d / "weights.csv", data, 2, 3)
        rows = read_csv(d / "weights.csv")
    assert len(rows) == len(data) == 8
    assert list(rows[0].keys()) == ["orbit_id", "period", "x1", "x2", "w1", "w2", "w3"]
    assert rows[0]["x1"] == "0/1"
    assert float(rows[0]["w1"]) == data.entries[0].weight.coordinate(1)
