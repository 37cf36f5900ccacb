"""The graph reading of stacked max-plus layers.

Edge convention: ``weights[i, j]`` scores the edge ``j -> i``, so one
relaxation step is ``dist'_i = max_j (weights[i, j] + dist_j)``.  An edge
drawn ``0 -> 1`` with weight 4 is stored at ``weights[1, 0] = 4``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from tropatt.errors import DimensionMismatchError, DomainError, EnumerationGuardError
from tropatt.linalg import (
    PathWitness,
    TropicalMatrix,
    ValueVector,
    reconstruct_path,
    trop_matvec,
)

__all__ = [
    "ENUMERATION_GUARD",
    "PathWitness",
    "TokenGraph",
    "add_self_loops",
    "bellman_ford_step",
    "enumerate_paths",
    "export_dot",
    "fig2",
    "fig2_candidates",
    "format_number",
    "reconstruct_path",
]

ENUMERATION_GUARD = 10**6


@dataclass(frozen=True)
class TokenGraph:
    weights: TropicalMatrix
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        w = self.weights if isinstance(self.weights, TropicalMatrix) else TropicalMatrix(self.weights)
        if w.rows != w.cols:
            raise DimensionMismatchError(f"graph weights must be square, got {w.shape}")
        object.__setattr__(self, "weights", w)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != w.rows:
                raise DimensionMismatchError(f"{len(labels)} labels for {w.rows} nodes")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.weights.rows

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "TokenGraph":
        """Build from ``(src, dst, weight)`` triples; missing edges are bottom."""
        a = np.full((n, n), -math.inf)
        for src, dst, w in edges:
            a[dst, src] = w
        return cls(TropicalMatrix(a), labels)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)


def fig2() -> TokenGraph:
    """Four tokens; edges 0->1 (4), 1->3 (4), 0->2 (6), 2->3 (1), 0->3 (5).

    The best two-hop route into node 3 is 0 -> 1 -> 3 with weight 8.
    """
    return TokenGraph.from_edges(4, [(0, 1, 4), (1, 3, 4), (0, 2, 6), (2, 3, 1), (0, 3, 5)])


def bellman_ford_step(dist: ValueVector, G: TokenGraph) -> ValueVector:
    """One relaxation of every edge: exactly ``G.weights ⊗ dist``."""
    if dist.len != G.n:
        raise DimensionMismatchError(f"distance vector of length {dist.len} for {G.n} nodes")
    return trop_matvec(G.weights, dist)


def add_self_loops(G: TokenGraph) -> TokenGraph:
    """Raise every diagonal weight to at least 0 so a path may stay in place.

    With stays allowed, length-``L`` optima also cover shorter routes.
    """
    a = np.array(G.weights.array)
    np.fill_diagonal(a, np.maximum(np.diag(a), 0.0))
    return TokenGraph(TropicalMatrix(a), G.labels)


@lru_cache(maxsize=64)
def _index_sequences(n: int, L: int) -> np.ndarray:
    seqs = np.array(list(itertools.product(range(n), repeat=L)), dtype=np.intp).reshape(-1, L)
    seqs.setflags(write=False)
    return seqs


def enumerate_paths(G: TokenGraph, V0: ValueVector, L: int, target: int) -> list[PathWitness]:
    """Every length-``L`` path ``j_0 -> ... -> j_{L-1} -> target`` with finite weight.

    Paths come in lexicographic order of ``(j_0, ..., j_{L-1})``.  Weights
    are accumulated left to right from ``V0[j_0]``.  Raises
    :class:`EnumerationGuardError` when ``n**L`` exceeds the guard.
    """
    n = G.n
    if isinstance(L, bool) or int(L) != L or L < 1:
        raise DomainError(f"path length must be a positive integer, got {L!r}")
    if not 0 <= target < n:
        raise DomainError(f"target {target} out of range for {n} nodes")
    if V0.len != n or V0.d != 1:
        raise DimensionMismatchError(f"need a scalar start vector of length {n}")
    if n**L > ENUMERATION_GUARD:
        raise EnumerationGuardError(
            f"{n}**{L} paths exceed the enumeration guard of {ENUMERATION_GUARD}; use the DP"
        )
    seqs = _index_sequences(n, int(L))
    a = G.weights.array
    w = V0.as_columns()[:, 0][seqs[:, 0]]
    for k in range(1, seqs.shape[1]):
        w = w + a[seqs[:, k], seqs[:, k - 1]]
    w = w + a[target, seqs[:, -1]]
    keep = np.flatnonzero(np.isfinite(w))
    t = (int(target),)
    return [PathWitness(tuple(seq) + t, wt) for seq, wt in zip(seqs[keep].tolist(), w[keep].tolist())]


def format_number(x: float) -> str:
    """Integers without a trailing ``.0``, otherwise shortest round-trip repr."""
    x = float(x)
    if math.isfinite(x) and x == int(x) and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(G: TokenGraph, highlight: PathWitness | Sequence[int] | None = None) -> str:
    """Deterministic Graphviz DOT text, with edges of ``highlight`` in orange."""
    hl = set()
    if highlight is not None:
        nodes = highlight.nodes if isinstance(highlight, PathWitness) else tuple(highlight)
        for k in nodes:
            if not 0 <= k < G.n:
                raise DomainError(f"highlight node {k} out of range for {G.n} nodes")
        hl = set(zip(nodes[:-1], nodes[1:]))
    a = G.weights.array
    lines = ["digraph G {", "  rankdir=LR;"]
    for i in range(G.n):
        lines.append(f"  {i} [label={_quote(G.label(i))}];")
    for src in range(G.n):
        for dst in range(G.n):
            w = a[dst, src]
            if w == -math.inf:
                continue
            attrs = f"label={_quote(format_number(w))}"
            if (src, dst) in hl:
                attrs += ', color="orange", penwidth=2'
            lines.append(f"  {src} -> {dst} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _collapse(nodes: Sequence[int]) -> tuple[int, ...]:
    return tuple(k for k, _ in itertools.groupby(nodes))


def fig2_candidates(G: TokenGraph | None = None, source: int = 0, target: int = 3, L: int = 2):
    """Best weight per distinct route (stays collapsed) into ``target``.

    Enumerates length-``L`` paths on the self-looped graph, so routes with
    fewer hops compete.  Returns ``(routes, winner)`` where ``routes`` maps a
    collapsed node tuple to its best weight and ``winner`` is the DP path.
    """
    G = add_self_loops(fig2() if G is None else G)
    V0 = ValueVector.unit(G.n, source)
    routes: dict[tuple[int, ...], float] = {}
    for p in enumerate_paths(G, V0, L, target):
        r = _collapse(p.nodes)
        routes[r] = max(routes.get(r, -math.inf), p.total_weight)
    winner = reconstruct_path(G.weights, V0, L, target)
    return dict(sorted(routes.items(), key=lambda kv: (kv[1], kv[0]))), winner
