from typing import Any, Dict, List, Mapping

from ..torus.automorphism import ToralAutomorphism
from ..torus.points import RationalTorusPoint
from ..util.serde import (
    PathT,
    fraction_from_str,
    fraction_to_str,
    read_json,
    write_csv,
    write_json,
)
from .cocycle import Cocycle
from .functions import (
    Bump,
    BumpSum,
    Coboundary,
    Constant,
    CoordinateFunction,
    FunctionSum,
    TrigPoly,
)
from .periodic_data import PeriodicData

COCYCLE_SCHEMA_VERSION = 1


def coordinate_to_dict(function: CoordinateFunction) -> Dict[str, Any]:
    """
    Serialize a coordinate function as a declarative descriptor. Bump
    centers are written as exact ``"num/den"`` strings.
    """
    if isinstance(function, Constant):
        return {"type": "constant", "value": float(function.value)}
    elif isinstance(function, TrigPoly):
        return {
            "type": "trig",
            "frequencies": [list(k) for k in function.frequencies],
            "cosine": list(function.cosine),
            "sine": list(function.sine),
        }
    elif isinstance(function, BumpSum):
        return {
            "type": "bumps",
            "bumps": [
                {
                    "center": [fraction_to_str(c) for c in bump.exact_center_fractions()],
                    "radius": bump.radius,
                    "amplitude": bump.amplitude,
                }
                for bump in function.bumps
            ],
        }
    elif isinstance(function, Coboundary):
        return {
            "type": "coboundary",
            "transfer": coordinate_to_dict(function.transfer),
            "matrix": [list(row) for row in function.automorphism.matrix],
        }
    elif isinstance(function, FunctionSum):
        return {"type": "sum", "terms": [coordinate_to_dict(t) for t in function.terms]}
    raise ValueError(f"Cannot serialize coordinate function of type {type(function).__name__}")


def coordinate_from_dict(data: Mapping[str, Any]) -> CoordinateFunction:
    """
    Deserialize a coordinate descriptor written by :func:`coordinate_to_dict`.
    """
    kind = data.get("type")
    if kind == "constant":
        return Constant(float(data["value"]))
    elif kind == "trig":
        return TrigPoly(
            frequencies=tuple(tuple(int(c) for c in k) for k in data["frequencies"]),
            cosine=tuple(data["cosine"]),
            sine=tuple(data["sine"]),
        )
    elif kind == "bumps":
        bumps = []
        for bump in data["bumps"]:
            exact = RationalTorusPoint.from_fractions(
                [fraction_from_str(c) for c in bump["center"]]
            )
            bumps.append(
                Bump(
                    center=exact.to_float(),
                    radius=float(bump["radius"]),
                    amplitude=float(bump["amplitude"]),
                    exact_center=exact,
                )
            )
        return BumpSum(tuple(bumps))
    elif kind == "coboundary":
        return Coboundary(
            transfer=coordinate_from_dict(data["transfer"]),
            automorphism=ToralAutomorphism.from_matrix(data["matrix"]),
        )
    elif kind == "sum":
        return FunctionSum(tuple(coordinate_from_dict(t) for t in data["terms"]))
    raise ValueError(f"Unknown coordinate function type: {kind!r}")


def cocycle_to_dict(f: Cocycle) -> Dict[str, Any]:
    return {
        "schema_version": COCYCLE_SCHEMA_VERSION,
        "dim": f.dim,
        "holder_exponent": f.holder_exponent,
        "coordinates": [coordinate_to_dict(c) for c in f.coordinates],
    }


def cocycle_from_dict(data: Mapping[str, Any]) -> Cocycle:
    version = data.get("schema_version")
    if version != COCYCLE_SCHEMA_VERSION:
        raise ValueError(
            f"Unsupported cocycle schema version {version!r}, expected {COCYCLE_SCHEMA_VERSION}"
        )
    return Cocycle(
        dim=int(data["dim"]),
        coordinates=tuple(coordinate_from_dict(c) for c in data.get("coordinates", [])),
        holder_exponent=float(data.get("holder_exponent", 1.0)),
    )


def save_cocycle(path: PathT, f: Cocycle):
    """
    Write a cocycle as JSON.
    """
    write_json(path, cocycle_to_dict(f))


def load_cocycle(path: PathT) -> Cocycle:
    """
    Read a cocycle written by :func:`save_cocycle`.
    """
    return cocycle_from_dict(read_json(path))


def periodic_data_rows(data: PeriodicData, level: int) -> List[List[Any]]:
    """
    Rows of the periodic-data table: orbit id, minimal period, exact base
    point coordinates and the first ``level`` weight coordinates.
    """
    rows = []
    for orbit_id, entry in enumerate(data.entries):
        base = [fraction_to_str(c) for c in entry.orbit.base.to_fractions()]
        weight = [repr(float(w)) for w in entry.weight.padded(level)]
        rows.append([orbit_id, entry.orbit.period, *base, *weight])
    return rows


def write_periodic_data_csv(path: PathT, data: PeriodicData, dim: int, level: int):
    """
    Export periodic data as CSV.

    :param path:
        Output file.
    :param data:
        The periodic data.
    :param dim:
        Torus dimension, for the base-point columns.
    :param level:
        Number of weight coordinates to write.
    """
    header = (
        ["orbit_id", "period"]
        + [f"x{i}" for i in range(1, dim + 1)]
        + [f"w{i}" for i in range(1, level + 1)]
    )
    write_csv(path, header, periodic_data_rows(data, level))
