"""JSON documents for kets, operators and decompositions.

A state document looks like::

    {"schema_version": 1, "kind": "ket", "dim": 4, "shape": [2, 2],
     "entries": [[0.7071067811865476, 0.0], [0.0, 0.0], ...]}

Operators use ``"kind": "operator"`` and list their ``dim * dim`` entries in
row-major order (a list of rows is accepted on input).  Floats are written
with Python's shortest round-trip representation, so loading a dumped
document reproduces every double bit for bit.
"""
from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .bases import Decomposition, as_decomposition
from .core import check_shape
from .errors import DimensionMismatchError, DocumentError, InfoTypesError

SCHEMA_VERSION = 1


def _pairs(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in values.reshape(-1)]


def state_document(x, shape: Sequence[int] | None = None) -> dict:
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        kind = "ket"
    elif x.ndim == 2 and x.shape[0] == x.shape[1]:
        kind = "operator"
    else:
        raise DimensionMismatchError(f"cannot serialize an array of shape {x.shape}")
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "dim": int(x.shape[0])}
    if shape is not None:
        doc["shape"] = list(check_shape(shape, x.shape[0]))
    doc["entries"] = _pairs(x)
    return doc


def _parse_entries(raw, count: int, field: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise DocumentError("entries must be a list", field)
    if raw and isinstance(raw[0], list) and raw[0] and isinstance(raw[0][0], list):
        raw = [pair for row in raw for pair in row]
    if len(raw) != count:
        raise DocumentError(f"expected {count} entries, found {len(raw)}", field)
    out = np.empty(count, dtype=complex)
    for i, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
            raise DocumentError("each entry must be a [real, imaginary] pair of numbers", f"{field}[{i}]")
        out[i] = complex(pair[0], pair[1])
    return out


def parse_state_document(doc: dict, where: str = ""):
    """Return ``(array, shape_or_None)`` from a parsed state document."""
    prefix = f"{where}." if where else ""
    if not isinstance(doc, dict):
        raise DocumentError("state document must be an object", where or None)
    kind = doc.get("kind")
    if kind not in ("ket", "operator"):
        raise DocumentError("kind must be 'ket' or 'operator'", prefix + "kind")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dim must be a positive integer", prefix + "dim")
    shape = doc.get("shape")
    if shape is not None:
        if not isinstance(shape, list) or not all(isinstance(s, int) and s > 0 for s in shape):
            raise DocumentError("shape must be a list of positive integers", prefix + "shape")
        try:
            shape = check_shape(shape, dim)
        except InfoTypesError as exc:
            raise DocumentError(str(exc), prefix + "shape") from None
    count = dim if kind == "ket" else dim * dim
    values = _parse_entries(doc.get("entries"), count, prefix + "entries")
    return (values if kind == "ket" else values.reshape(dim, dim)), shape


def decomposition_document(V) -> dict:
    V = as_decomposition(V)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "decomposition",
        "dim": V.dim,
        "labels": list(V.labels),
        "projectors": [state_document(p) for p in V.projectors],
    }


def parse_decomposition_document(doc: dict) -> Decomposition:
    if not isinstance(doc, dict) or doc.get("kind") != "decomposition":
        raise DocumentError("kind must be 'decomposition'", "kind")
    projs = doc.get("projectors")
    if not isinstance(projs, list) or not projs:
        raise DocumentError("projectors must be a non-empty list", "projectors")
    ops = []
    for i, p in enumerate(projs):
        op, _ = parse_state_document(p, f"projectors[{i}]")
        if op.ndim != 2:
            raise DocumentError("projectors must be operators", f"projectors[{i}].kind")
        ops.append(op)
    labels = doc.get("labels", [])
    if not isinstance(labels, list):
        raise DocumentError("labels must be a list", "labels")
    try:
        return Decomposition(tuple(ops), tuple(labels))
    except InfoTypesError as exc:
        raise DocumentError(str(exc), "projectors") from None


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1)


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, line=exc.lineno) from None


def load_any(path: str):
    """Load a file and return ``("state", (array, shape))`` or ``("decomposition", Decomposition)``."""
    with open(path) as fh:
        doc = loads(fh.read())
    if isinstance(doc, dict) and doc.get("kind") == "decomposition":
        return "decomposition", parse_decomposition_document(doc)
    return "state", parse_state_document(doc)


def save_state(path: str, x, shape=None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(state_document(x, shape)))
        fh.write("\n")


def save_decomposition(path: str, V) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(decomposition_document(V)))
        fh.write("\n")
