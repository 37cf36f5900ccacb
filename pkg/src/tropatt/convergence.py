"""Diagnostics for the beta -> inf limit: margins, sweeps and the winner check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tropatt.attention import (
    attention_forward,
    check_beta,
    hard_attention,
    log_space_attention,
)
from tropatt.errors import AllBottomRowError, DimensionMismatchError, DomainError
from tropatt.linalg import TropicalMatrix, ValueVector, trop_matvec
from tropatt.semiring import BOTTOM, TropicalScalar

__all__ = [
    "DEFAULT_EPSILON_TIE",
    "ConvergenceRecord",
    "GapRecord",
    "MarginReport",
    "RegionClassification",
    "classify_region",
    "hard_attention_bound",
    "row_margin",
    "sweep",
    "theorem_gap_report",
]

DEFAULT_EPSILON_TIE = 1e-9


@dataclass(frozen=True)
class MarginReport:
    """``margin = row_max - second_max``; ``inf`` when the row has one finite entry."""

    row: int
    winner: int
    row_max: TropicalScalar
    second_max: TropicalScalar
    margin: float


@dataclass(frozen=True)
class RegionClassification:
    winner: int
    margin: float
    on_boundary: bool


@dataclass(frozen=True)
class ConvergenceRecord:
    beta: float
    dist_hard: float
    dist_trop: float
    min_margin: float


@dataclass(frozen=True)
class GapRecord:
    """Per-row comparison of the score argmax with the max-plus argmax."""

    row: int
    score_winner: int
    tropical_winner: int
    agree: bool
    hard_value: float
    tropical_value: float
    difference: float


def _top_two(scores: np.ndarray):
    """Lowest-index argmax, max and runner-up (over the other indices)."""
    winner = int(np.argmax(scores))
    best = float(scores[winner])
    rest = np.delete(scores, winner)
    second = float(rest.max()) if rest.size else -math.inf
    return winner, best, second


def row_margin(A: TropicalMatrix, i: int) -> MarginReport:
    if not 0 <= i < A.rows:
        raise DomainError(f"row {i} out of range for {A.rows} rows")
    winner, best, second = _top_two(A.array[i])
    if best == -math.inf:
        raise AllBottomRowError(i)
    if second == -math.inf:
        return MarginReport(i, winner, TropicalScalar(best), BOTTOM, math.inf)
    return MarginReport(i, winner, TropicalScalar(best), TropicalScalar(second), best - second)


def classify_region(scores, epsilon_tie: float = DEFAULT_EPSILON_TIE) -> RegionClassification:
    """Which simplex vertex the softmax of ``scores`` flows to as beta grows.

    ``on_boundary`` flags scores within ``epsilon_tie`` of a tie, where the
    limit is a mixture rather than a vertex.
    """
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 1 or s.size == 0:
        raise DomainError("classify_region needs a nonempty 1-D score array")
    if epsilon_tie < 0:
        raise DomainError("epsilon_tie must be nonnegative")
    winner, best, second = _top_two(s)
    margin = math.inf if second == -math.inf else best - second
    return RegionClassification(winner, margin, margin <= epsilon_tie)


def hard_attention_bound(A: TropicalMatrix, V: ValueVector, beta: float) -> np.ndarray:
    """Per-row bound ``(n-1) exp(-beta margin) max_j |v_j - v_winner|``.

    Valid for rows with a unique argmax; masked columns count neither in
    ``n`` nor in the spread.
    """
    a = A.array
    vals = V.as_columns()
    out = np.empty(A.rows)
    for i in range(A.rows):
        rep = row_margin(A, i)
        mask = np.isfinite(a[i])
        k = int(mask.sum())
        spread = float(np.abs(vals[mask] - vals[rep.winner]).max())
        out[i] = (k - 1) * math.exp(-beta * rep.margin) * spread if k > 1 else 0.0
    return out


def _check_schedule(betas: Sequence[float]) -> list[float]:
    bs = [check_beta(b, positive=True) for b in betas]
    if not bs:
        raise DomainError("beta schedule is empty")
    if any(b1 >= b2 for b1, b2 in zip(bs, bs[1:])):
        raise DomainError("beta schedule must be strictly ascending")
    return bs


def sweep(A: TropicalMatrix, V: ValueVector, betas: Sequence[float]) -> list[ConvergenceRecord]:
    """Sup-norm distances to both limits at each beta of an ascending schedule."""
    bs = _check_schedule(betas)
    if A.cols != V.len:
        raise DimensionMismatchError(f"matrix has {A.cols} columns but vector has length {V.len}")
    hard = hard_attention(A, V).as_columns()
    trop = trop_matvec(A, V).as_columns()
    margins = [row_margin(A, i).margin for i in range(A.rows)]
    min_margin = min(margins)
    records = []
    for b in bs:
        soft = attention_forward(A, V, b).as_columns()
        logsp = log_space_attention(A, V, b).as_columns()
        records.append(
            ConvergenceRecord(
                beta=b,
                dist_hard=float(np.abs(soft - hard).max()),
                dist_trop=float(np.abs(logsp - trop).max()),
                min_margin=min_margin,
            )
        )
    return records


def theorem_gap_report(A: TropicalMatrix, V: ValueVector) -> list[GapRecord]:
    """Does the score argmax coincide with the max-plus argmax, row by row?

    ``score_winner`` is the lowest ``argmax_j A_ij``; ``tropical_winner`` the
    lowest ``argmax_j (A_ij + v_j)``.  ``difference`` is
    ``|hard_i - (A ⊗ V)_i|``.  Scalar values only.
    """
    if V.d != 1:
        raise DimensionMismatchError("theorem_gap_report needs scalar values (d = 1)")
    hard = hard_attention(A, V).array
    trop = trop_matvec(A, V).array
    a = A.array
    v = V.array
    records = []
    for i in range(A.rows):
        sw = int(np.argmax(a[i]))
        tw = int(np.argmax(a[i] + v))
        records.append(
            GapRecord(
                row=i,
                score_winner=sw,
                tropical_winner=tw,
                agree=sw == tw,
                hard_value=float(hard[i]),
                tropical_value=float(trop[i]),
                difference=float(abs(hard[i] - trop[i])),
            )
        )
    return records
