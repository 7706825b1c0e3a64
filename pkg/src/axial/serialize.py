"""JSON formats for fields, algebras and reports. Scalars are always exact:
rationals as ``"p/q"`` strings, prime-field elements as integers, quadratic and
dual elements as pairs."""

from __future__ import annotations

import enum
import hashlib
import json
from pathlib import Path
from typing import Any

from gmpy2 import mpq

from .algebra import AlgebraError, AlgebraTable
from .scalars import DualElem, QuadElem, Ring, field_from_spec

MPQ = type(mpq(0))


class FormatError(ValueError):
    pass


def jsonable(obj: Any) -> Any:
    """Convert nested results into plain JSON values without losing exactness."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, MPQ):
        return str(obj)
    if isinstance(obj, QuadElem):
        return [jsonable(obj.c0), jsonable(obj.c1)]
    if isinstance(obj, DualElem):
        return [jsonable(obj.re), jsonable(obj.eps)]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Ring):
        return obj.spec()
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, float):
        raise FormatError("floating-point values are never serialised")
    return repr(obj)


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def algebra_to_json(A: AlgebraTable) -> dict:
    F = A.field
    return {
        "field": F.spec(),
        "dim": A.dim,
        "table": [[[F.to_json(c) for c in v] for v in row] for row in A.table],
        "axes": [[F.to_json(c) for c in a] for a in A.axes],
        "labels": list(A.labels),
        "eta": None if A.eta is None else F.to_json(A.eta),
    }


def algebra_from_json(data: dict, field: Ring | None = None) -> AlgebraTable:
    """Parse an algebra; ``field`` reinterprets the constants in another field
    (for example reducing a rational table modulo ``p``)."""
    try:
        src = field_from_spec(data["field"])
        F = src if field is None else field
        n = int(data["dim"])
        table = [[tuple(F.from_json(c) for c in v) for v in row] for row in data["table"]]
        axes = [tuple(F.from_json(c) for c in a) for a in data.get("axes", [])]
        eta = data.get("eta")
        eta = None if eta is None else F.from_json(eta)
        labels = data.get("labels")
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed algebra file: {exc}") from exc
    if len(table) != n:
        raise FormatError(f"table has {len(table)} rows, dim is {n}")
    if any(len(a) != n for a in axes):
        raise FormatError("axis vector of the wrong length")
    return AlgebraTable(F, table, labels=labels, axes=axes, eta=eta)


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


__all__ = [
    "AlgebraError",
    "FormatError",
    "algebra_from_json",
    "algebra_to_json",
    "dumps",
    "file_sha256",
    "jsonable",
    "read_json",
    "write_json",
]
