"""Dense max-plus matrices and vectors.

Storage is a read-only ``float64`` array in which bottom is ``-inf``.  The
constructors reject NaN and ``+inf``, so sums inside the kernels only ever
combine finite values and ``-inf`` and stay NaN-free.

Conventions
-----------
``(A ⊗ V)_i = max_j (A_ij + v_j)``.  Read as a graph, ``A_ij`` is the weight
of the edge ``j -> i`` (information flows from column to row).

Kernels evaluate every sum ``A_ij + v_j`` once, in IEEE double precision,
and then take a maximum.  ``max`` is exact, so the result agrees bit for bit
with a scalar loop over :func:`tropatt.semiring.trop_add` and
:func:`tropatt.semiring.trop_mul`.  Floating ``+`` is not associative, so
products grouped differently (repeated squaring vs. a sequential chain)
agree exactly only when the partial sums are representable, e.g. on integer
or dyadic entries of moderate size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tropatt.errors import (
    AllBottomRowError,
    DimensionMismatchError,
    DomainError,
    InvalidValueError,
)
from tropatt.semiring import BOTTOM, TropicalScalar

__all__ = [
    "PathWitness",
    "TropicalMatrix",
    "ValueVector",
    "argmax_row_witness",
    "path_weight",
    "propagate",
    "reconstruct_path",
    "trop_matmul",
    "trop_matvec",
    "trop_power",
]

NEG_INF = -math.inf


def _convert_entry(x) -> float:
    if x is None:
        return NEG_INF
    if isinstance(x, TropicalScalar):
        return float(x)
    if isinstance(x, str):
        if x.strip().lower() in ("-inf", "-infinity"):
            return NEG_INF
        raise InvalidValueError(f"unexpected string entry {x!r}")
    if isinstance(x, bool):
        raise InvalidValueError("booleans are not tropical scalars")
    return float(x)


def _to_array(data) -> np.ndarray:
    """Convert array-likes (None / TropicalScalar / '-inf' allowed) to float64."""
    if isinstance(data, np.ndarray) and data.dtype.kind in "fiu":
        arr = np.array(data, dtype=np.float64)
    else:
        try:
            arr = np.asarray(data, dtype=object)
            arr = np.vectorize(_convert_entry, otypes=[np.float64])(arr) if arr.size else arr.astype(np.float64)
        except (TypeError, ValueError) as exc:
            raise InvalidValueError(f"malformed entries: {exc}") from None
    if np.isnan(arr).any():
        raise InvalidValueError("NaN entries are not allowed")
    if (arr == math.inf).any():
        raise InvalidValueError("+inf entries are not allowed")
    arr.setflags(write=False)
    return arr


def _bottom_to_none(arr: np.ndarray):
    if arr.ndim == 0:
        v = float(arr)
        return None if v == NEG_INF else v
    return [_bottom_to_none(a) for a in arr]


class TropicalMatrix:
    """A dense ``rows x cols`` matrix over the max-plus semiring."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = _to_array(entries)
        if a.ndim != 2:
            raise DimensionMismatchError(f"matrix must be 2-D, got shape {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionMismatchError("matrix needs at least one row and one column")
        self._a = a

    @classmethod
    def identity(cls, n: int) -> "TropicalMatrix":
        a = np.full((n, n), NEG_INF)
        np.fill_diagonal(a, 0.0)
        return cls(a)

    @classmethod
    def bottom(cls, rows: int, cols: int) -> "TropicalMatrix":
        return cls(np.full((rows, cols), NEG_INF))

    @property
    def array(self) -> np.ndarray:
        """Read-only view; bottom appears as ``-inf``."""
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self._a)

    def __getitem__(self, idx) -> TropicalScalar:
        i, j = idx
        return TropicalScalar(float(self._a[i, j]))

    def to_nested(self) -> list[list[float | None]]:
        """Nested lists with ``None`` for bottom."""
        return _bottom_to_none(self._a)

    def __eq__(self, other):
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def __repr__(self):
        return f"TropicalMatrix({self.to_nested()!r})"


class ValueVector:
    """Length-``n`` values, scalar (1-D) or ``d``-dimensional (``n x d``).

    ``d``-dimensional values are treated componentwise everywhere.
    """

    __slots__ = ("_v",)

    def __init__(self, entries):
        v = _to_array(entries)
        if v.ndim not in (1, 2):
            raise DimensionMismatchError(f"value vector must be 1-D or 2-D, got shape {v.shape}")
        if v.shape[0] < 1 or (v.ndim == 2 and v.shape[1] < 1):
            raise DimensionMismatchError("value vector needs len >= 1 and d >= 1")
        self._v = v

    @classmethod
    def bottom(cls, n: int) -> "ValueVector":
        return cls(np.full(n, NEG_INF))

    @classmethod
    def unit(cls, n: int, source: int) -> "ValueVector":
        """0 at ``source`` and bottom elsewhere: a single start node."""
        v = np.full(n, NEG_INF)
        v[source] = 0.0
        return cls(v)

    @property
    def array(self) -> np.ndarray:
        return self._v

    @property
    def len(self) -> int:
        return self._v.shape[0]

    def __len__(self):
        return self._v.shape[0]

    @property
    def d(self) -> int:
        return 1 if self._v.ndim == 1 else self._v.shape[1]

    @property
    def is_scalar(self) -> bool:
        return self._v.ndim == 1

    def as_columns(self) -> np.ndarray:
        """Always ``(len, d)``."""
        return self._v if self._v.ndim == 2 else self._v[:, None]

    def _with_shape_of(self, cols: np.ndarray) -> "ValueVector":
        return ValueVector(cols[:, 0] if self.is_scalar else cols)

    def __getitem__(self, i):
        if self.is_scalar:
            return TropicalScalar(float(self._v[i]))
        return tuple(TropicalScalar(float(x)) for x in self._v[i])

    def to_nested(self):
        return _bottom_to_none(self._v)

    def __eq__(self, other):
        if not isinstance(other, ValueVector):
            return NotImplemented
        return self._v.shape == other._v.shape and bool(np.array_equal(self._v, other._v))

    __hash__ = None

    def __repr__(self):
        return f"ValueVector({self.to_nested()!r})"


@dataclass(frozen=True, slots=True)
class PathWitness:
    """Node sequence ``(j_0, ..., j_{L-1}, i)`` and its finite total weight.

    ``total_weight`` is ``V0[j_0] + A[j_1, j_0] + ... + A[i, j_{L-1}]``,
    accumulated left to right.
    """

    nodes: tuple[int, ...]
    total_weight: float

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.nodes[:-1], self.nodes[1:]))


def _candidate_sums(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    # (rows, cols, d) array of A_ij + v_jk
    return a[:, :, None] + v[None, :, :]


def trop_matvec(A: TropicalMatrix, V: ValueVector) -> ValueVector:
    """``(A ⊗ V)_i = max_j (A_ij + v_j)``, componentwise for vector values."""
    if A.cols != V.len:
        raise DimensionMismatchError(f"matrix has {A.cols} columns but vector has length {V.len}")
    out = _candidate_sums(A.array, V.as_columns()).max(axis=1)
    return V._with_shape_of(out)


def trop_matmul(A: TropicalMatrix, B: TropicalMatrix) -> TropicalMatrix:
    """``(A ⊗ B)_ik = max_j (A_ij + B_jk)``."""
    if A.cols != B.rows:
        raise DimensionMismatchError(f"cannot multiply {A.shape} by {B.shape}")
    return TropicalMatrix(_candidate_sums(A.array, B.array).max(axis=1))


def trop_power(A: TropicalMatrix, L: int) -> TropicalMatrix:
    """``A ⊗ A ⊗ ... ⊗ A`` (``L`` factors) by repeated squaring.

    ``L = 0`` is rejected; use :meth:`TropicalMatrix.identity` explicitly.
    """
    if A.rows != A.cols:
        raise DimensionMismatchError(f"power of a non-square {A.shape} matrix")
    if isinstance(L, bool) or int(L) != L or L < 1:
        raise DomainError(f"power must be a positive integer, got {L!r}")
    L = int(L)
    result = None
    base = A
    while True:
        if L & 1:
            result = base if result is None else trop_matmul(result, base)
        L >>= 1
        if not L:
            return result
        base = trop_matmul(base, base)


def _row_argmax(scores: np.ndarray) -> np.ndarray:
    """Lowest argmax per row; -1 where the row is entirely bottom."""
    idx = np.argmax(scores, axis=1)
    dead = scores[np.arange(scores.shape[0]), idx] == NEG_INF
    idx[dead] = -1
    return idx


def _scalar_values(V: ValueVector) -> np.ndarray:
    if V.d != 1:
        raise DimensionMismatchError("witnesses need scalar values (d = 1)")
    return V.as_columns()[:, 0]


def argmax_row_witness(A: TropicalMatrix, V: ValueVector) -> np.ndarray:
    """Per row, the smallest ``j`` attaining ``max_j (A_ij + v_j)``."""
    if A.cols != V.len:
        raise DimensionMismatchError(f"matrix has {A.cols} columns but vector has length {V.len}")
    idx = _row_argmax(A.array + _scalar_values(V)[None, :])
    dead = np.flatnonzero(idx < 0)
    if dead.size:
        raise AllBottomRowError(int(dead[0]))
    idx.setflags(write=False)
    return idx


def propagate(layers: Sequence[TropicalMatrix], V0: ValueVector):
    """Apply ``layers`` in order to ``V0``, recording witnesses.

    Returns ``(states, witnesses)`` where ``states[0] is V0``,
    ``states[l] = layers[l-1] ⊗ states[l-1]`` and ``witnesses[l-1]`` holds
    the lowest-index argmax of each row of that product (``-1`` for rows
    with a bottom result).
    """
    if not layers:
        raise DomainError("need at least one layer")
    v = _scalar_values(V0)
    states = [V0]
    witnesses = []
    for A in layers:
        if A.cols != v.shape[0]:
            raise DimensionMismatchError(f"layer of shape {A.shape} applied to length {v.shape[0]}")
        sums = A.array + v[None, :]
        w = _row_argmax(sums)
        v = sums.max(axis=1)
        witnesses.append(w)
        states.append(ValueVector(v))
    return states, witnesses


def reconstruct_path(A, V0: ValueVector, L: int, target: int) -> PathWitness:
    """Best length-``L`` path ending at ``target`` and its weight.

    ``A`` is a square matrix reused at every layer, or a sequence of ``L``
    matrices, one per layer.  The weight equals ``(A^{⊗L} ⊗ V0)_target``;
    ties resolve to the lowest node index at every layer.
    """
    if isinstance(A, TropicalMatrix):
        if A.rows != A.cols:
            raise DimensionMismatchError(f"path search needs a square matrix, got {A.shape}")
        if isinstance(L, bool) or int(L) != L or L < 1:
            raise DomainError(f"path length must be a positive integer, got {L!r}")
        layers = [A] * int(L)
    else:
        layers = list(A)
        if len(layers) != L:
            raise DomainError(f"{len(layers)} layer matrices given for L = {L}")
    n = layers[-1].rows
    if not 0 <= target < n:
        raise DomainError(f"target {target} out of range for {n} nodes")
    states, witnesses = propagate(layers, V0)
    weight = float(states[-1].array[target])
    if weight == NEG_INF:
        raise AllBottomRowError(target, what="no finite path reaches target")
    nodes = [int(target)]
    for w in reversed(witnesses):
        nodes.append(int(w[nodes[-1]]))
    return PathWitness(tuple(reversed(nodes)), weight)


def path_weight(A: TropicalMatrix, V0: ValueVector, nodes: Sequence[int]) -> TropicalScalar:
    """Re-sum a node sequence left to right: ``V0[j_0] + A[j_1, j_0] + ...``."""
    a, v = A.array, _scalar_values(V0)
    w = float(v[nodes[0]])
    for src, dst in zip(nodes[:-1], nodes[1:]):
        w = w + float(a[dst, src])
    return BOTTOM if w == NEG_INF else TropicalScalar(w)
