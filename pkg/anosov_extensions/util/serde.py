import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

from ..sequences.vector import SeqVector

PathT = Union[str, Path]


def fraction_to_str(value: Fraction) -> str:
    """
    Serialize an exact rational as a ``"num/den"`` string. Integers are
    written with an explicit denominator of one.
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(value: Union[str, int]) -> Fraction:
    """
    Parse an exact rational from a ``"num/den"`` string or an integer.
    """
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"Expected a 'num/den' string, but got: {value!r}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Invalid exact rational: {value!r}")


def seqvector_to_dict(vector: SeqVector) -> Dict[str, Any]:
    """
    Serialize a sequence vector as a flat real array with its declared
    support length.
    """
    return {"support": vector.support, "values": [float(v) for v in vector.values]}


def seqvector_from_dict(data: Mapping[str, Any]) -> SeqVector:
    """
    Deserialize a sequence vector written by :func:`seqvector_to_dict`.
    """
    values = data.get("values")
    if not isinstance(values, list):
        raise ValueError("Sequence vector must have a 'values' list")
    support = data.get("support", len(values))
    if support != len(values):
        raise ValueError(
            f"Declared support {support} does not match the number of values ({len(values)})"
        )
    return SeqVector(tuple(float(v) for v in values))


def write_json(path: PathT, data: Any):
    """
    Write JSON deterministically (sorted keys, fixed indentation).
    """
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def read_json(path: PathT) -> Any:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def write_csv(path: PathT, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    """
    Write rows as CSV with a header line.
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def read_csv(path: PathT) -> List[Dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
