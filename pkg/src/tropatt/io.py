"""JSON and CSV formats.

Matrix   ``{"rows": R, "cols": C, "entries": [[...], ...]}``
Vector   ``{"len": N, "entries": [...]}``; d-dimensional values as ``[[...], ...]``
Embedding ``{"n": N, "d": D, "Q": [[...]], "K": [[...]], "values": [...]}``
Graph    ``{"n": N, "weights": [[...]], "labels": [...]}`` (labels optional)

``null`` encodes bottom; readers also accept the string ``"-inf"``.
Writers emit compact JSON with a fixed key order and shortest round-trip
floats, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from tropatt.attention import EmbeddingSet
from tropatt.convergence import ConvergenceRecord, GapRecord, MarginReport
from tropatt.errors import SchemaError, TropattError
from tropatt.linalg import PathWitness, TropicalMatrix, ValueVector
from tropatt.pathfinding import TokenGraph

SWEEP_HEADER = ("beta", "dist_hard", "dist_trop", "min_margin")


def dumps(obj: Any) -> str:
    return json.dumps(obj, allow_nan=False, separators=(", ", ": ")) + "\n"


def _load(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object")
    return obj


def _field(obj: dict, key: str, kind: str):
    if key not in obj:
        raise SchemaError(f"{kind} JSON is missing {key!r}")
    return obj[key]


def _count(obj: dict, key: str, kind: str) -> int:
    v = _field(obj, key, kind)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise SchemaError(f"{kind} JSON field {key!r} must be a positive integer")
    return v


def _build(cls, entries, kind: str):
    try:
        return cls(entries)
    except TropattError as exc:
        raise SchemaError(f"bad {kind} entries: {exc}") from None


def _check_finite_numbers(nested, kind: str):
    if isinstance(nested, list):
        for x in nested:
            _check_finite_numbers(x, kind)
    elif isinstance(nested, bool) or not isinstance(nested, (int, float)) or not math.isfinite(nested):
        raise SchemaError(f"{kind} entries must be finite numbers")


# -- matrices and vectors -------------------------------------------------


def matrix_to_obj(A: TropicalMatrix) -> dict:
    return {"rows": A.rows, "cols": A.cols, "entries": A.to_nested()}


def matrix_from_obj(obj: dict) -> TropicalMatrix:
    rows = _count(obj, "rows", "matrix")
    cols = _count(obj, "cols", "matrix")
    entries = _field(obj, "entries", "matrix")
    if not isinstance(entries, list) or len(entries) != rows or any(
        not isinstance(r, list) or len(r) != cols for r in entries
    ):
        raise SchemaError(f"matrix entries must be a {rows} x {cols} nested array")
    return _build(TropicalMatrix, entries, "matrix")


def vector_to_obj(V: ValueVector) -> dict:
    return {"len": V.len, "entries": V.to_nested()}


def vector_from_obj(obj: dict) -> ValueVector:
    n = _count(obj, "len", "vector")
    entries = _field(obj, "entries", "vector")
    if not isinstance(entries, list) or len(entries) != n:
        raise SchemaError(f"vector entries must be an array of length {n}")
    nested = [isinstance(e, list) for e in entries]
    if any(nested) and not all(nested):
        raise SchemaError("vector entries mix scalars and arrays")
    if all(nested) and len({len(e) for e in entries}) != 1:
        raise SchemaError("d-dimensional vector entries must share one length")
    return _build(ValueVector, entries, "vector")


def read_matrix(text: str) -> TropicalMatrix:
    """Parse matrix JSON; graph JSON is accepted too (its weights)."""
    obj = _load(text)
    if "weights" in obj and "entries" not in obj:
        return graph_from_obj(obj).weights
    return matrix_from_obj(obj)


def read_vector(text: str) -> ValueVector:
    return vector_from_obj(_load(text))


def write_matrix(A: TropicalMatrix) -> str:
    return dumps(matrix_to_obj(A))


def write_vector(V: ValueVector) -> str:
    return dumps(vector_to_obj(V))


# -- embeddings and graphs ------------------------------------------------


def embeddings_from_obj(obj: dict) -> EmbeddingSet:
    n = _count(obj, "n", "embedding")
    d = _count(obj, "d", "embedding")
    Q = _field(obj, "Q", "embedding")
    K = _field(obj, "K", "embedding")
    values = _field(obj, "values", "embedding")
    for name, M in (("Q", Q), ("K", K)):
        if not isinstance(M, list) or len(M) != n or any(not isinstance(r, list) or len(r) != d for r in M):
            raise SchemaError(f"embedding {name} must be an {n} x {d} nested array")
        _check_finite_numbers(M, "embedding")
    if isinstance(values, dict):
        values = vector_from_obj(values).to_nested()
    if not isinstance(values, list) or len(values) != n:
        raise SchemaError(f"embedding values must be an array of length {n}")
    _check_finite_numbers(values, "embedding")
    try:
        return EmbeddingSet(Q, K, ValueVector(values))
    except TropattError as exc:
        raise SchemaError(f"bad embeddings: {exc}") from None


def embeddings_to_obj(E: EmbeddingSet) -> dict:
    return {"n": E.n, "d": E.d, "Q": E.Q.tolist(), "K": E.K.tolist(), "values": E.values.to_nested()}


def read_embeddings(text: str) -> EmbeddingSet:
    return embeddings_from_obj(_load(text))


def graph_from_obj(obj: dict) -> TokenGraph:
    n = _count(obj, "n", "graph")
    weights = _field(obj, "weights", "graph")
    if not isinstance(weights, list) or len(weights) != n or any(
        not isinstance(r, list) or len(r) != n for r in weights
    ):
        raise SchemaError(f"graph weights must be an {n} x {n} nested array")
    labels = obj.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or len(labels) != n or not all(isinstance(s, str) for s in labels)
    ):
        raise SchemaError(f"graph labels must be {n} strings")
    return TokenGraph(_build(TropicalMatrix, weights, "graph"), None if labels is None else tuple(labels))


def graph_to_obj(G: TokenGraph) -> dict:
    obj = {"n": G.n, "weights": G.weights.to_nested()}
    if G.labels is not None:
        obj["labels"] = list(G.labels)
    return obj


def read_graph(text: str) -> TokenGraph:
    """Parse graph JSON; a bare square matrix JSON is accepted too."""
    obj = _load(text)
    if "entries" in obj and "weights" not in obj:
        try:
            return TokenGraph(matrix_from_obj(obj))
        except TropattError as exc:
            raise SchemaError(str(exc)) from None
    return graph_from_obj(obj)


# -- results ----------------------------------------------------------------


def _opt_float(x: float):
    return None if not math.isfinite(x) else x


def path_to_obj(p: PathWitness) -> dict:
    return {"nodes": list(p.nodes), "length": p.length, "total_weight": p.total_weight}


def margin_to_obj(m: MarginReport, on_boundary: bool) -> dict:
    """``second_max`` and ``margin`` are null when the row has one finite entry."""
    return {
        "row": m.row,
        "winner": m.winner,
        "row_max": m.row_max.value,
        "second_max": m.second_max.value,
        "margin": _opt_float(m.margin),
        "on_boundary": on_boundary,
    }


def gap_to_obj(g: GapRecord) -> dict:
    return {
        "row": g.row,
        "score_winner": g.score_winner,
        "tropical_winner": g.tropical_winner,
        "agree": g.agree,
        "hard_value": g.hard_value,
        "tropical_value": _opt_float(g.tropical_value),
        "difference": _opt_float(g.difference),
    }


def sweep_to_csv(records: list[ConvergenceRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in records:
        w.writerow([repr(float(x)) for x in (r.beta, r.dist_hard, r.dist_trop, r.min_margin)])
    return buf.getvalue()


def sweep_from_csv(text: str) -> list[ConvergenceRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != SWEEP_HEADER:
        raise SchemaError("sweep CSV header must be " + ",".join(SWEEP_HEADER))
    try:
        return [ConvergenceRecord(*(float(x) for x in row)) for row in rows[1:] if row]
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad sweep CSV row: {exc}") from None
