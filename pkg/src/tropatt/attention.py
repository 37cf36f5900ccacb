"""Softmax attention at inverse temperature beta and its two beta -> inf limits.

Scores are plain inner products ``A_ij = <q_i, k_j>`` (no ``1/sqrt(d)``;
pre-scale the embeddings if you want it).  Bottom scores act as a mask and
receive weight exactly 0.

Two limits are provided because they differ in general:

* :func:`hard_attention` is the pointwise limit of the softmax average,
  ``v`` at the row's score argmax (mean over tied keys);
* :func:`log_space_attention` is ``(1/beta) log sum_j exp(beta (A_ij + v_j))``,
  which tends to the max-plus product ``max_j (A_ij + v_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tropatt.errors import AllBottomRowError, DimensionMismatchError, DomainError, InvalidValueError
from tropatt.linalg import TropicalMatrix, ValueVector

__all__ = [
    "EmbeddingSet",
    "attention_forward",
    "check_beta",
    "hard_attention",
    "log_space_attention",
    "log_sum_exp",
    "score_matrix",
    "softmax_weights",
]


def check_beta(beta, positive: bool = False) -> float:
    """Validate an inverse temperature; ``positive`` additionally excludes 0."""
    if isinstance(beta, bool):
        raise DomainError("beta must be a real number")
    b = float(beta)
    if not math.isfinite(b) or b < 0:
        raise DomainError(f"beta must be finite and >= 0, got {beta!r}")
    if positive and b == 0:
        raise DomainError("beta must be > 0 here (1/beta is undefined at 0)")
    return b


@dataclass(frozen=True)
class EmbeddingSet:
    """Queries ``Q`` and keys ``K`` (both ``n x d``) plus per-token values."""

    Q: np.ndarray
    K: np.ndarray
    values: ValueVector

    def __post_init__(self):
        Q = np.array(self.Q, dtype=np.float64)
        K = np.array(self.K, dtype=np.float64)
        values = self.values if isinstance(self.values, ValueVector) else ValueVector(self.values)
        if Q.ndim != 2 or K.ndim != 2 or Q.shape != K.shape:
            raise DimensionMismatchError(f"Q {Q.shape} and K {K.shape} must both be n x d")
        if Q.shape[0] < 1 or Q.shape[1] < 1:
            raise DimensionMismatchError("need n >= 1 and d >= 1")
        if values.len != Q.shape[0]:
            raise DimensionMismatchError(f"{values.len} values for {Q.shape[0]} tokens")
        if not (np.isfinite(Q).all() and np.isfinite(K).all() and np.isfinite(values.array).all()):
            raise InvalidValueError("embeddings must be finite")
        Q.setflags(write=False)
        K.setflags(write=False)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    @property
    def d(self) -> int:
        return self.Q.shape[1]


def score_matrix(E: EmbeddingSet) -> TropicalMatrix:
    return TropicalMatrix(E.Q @ E.K.T)


def log_sum_exp(x, beta) -> float:
    """``(1/beta) log sum_j exp(beta x_j)``, shifted by ``M = max x``.

    Always satisfies ``0 <= result - max(x) <= log(n)/beta`` up to rounding,
    and cannot overflow since every exponent is <= 0.
    """
    beta = check_beta(beta, positive=True)
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise DomainError("log_sum_exp needs a nonempty 1-D input")
    if not np.isfinite(x).all():
        raise InvalidValueError("log_sum_exp needs finite inputs")
    m = x.max()
    return float(m + np.log(np.exp(beta * (x - m)).sum()) / beta)


def _row_max(scores: np.ndarray) -> np.ndarray:
    """Row maxima of a ``(rows, cols, ...)`` array; error on an all-bottom row."""
    m = scores.max(axis=1)
    dead = np.argwhere(m == -math.inf)
    if dead.size:
        raise AllBottomRowError(int(dead[0][0]))
    return m


def softmax_weights(A: TropicalMatrix, beta) -> np.ndarray:
    """Row-stochastic ``alpha_ij = exp(beta A_ij) / sum_k exp(beta A_ik)``."""
    beta = check_beta(beta)
    a = A.array
    m = _row_max(a)
    mask = A.finite_mask
    shifted = np.where(mask, a - m[:, None], 0.0)
    w = np.where(mask, np.exp(beta * shifted), 0.0)
    return w / w.sum(axis=1, keepdims=True)


def _check_values(A: TropicalMatrix, V: ValueVector):
    if A.cols != V.len:
        raise DimensionMismatchError(f"matrix has {A.cols} columns but vector has length {V.len}")
    if not np.isfinite(V.array).all():
        raise InvalidValueError("attention values must be finite")


def attention_forward(A: TropicalMatrix, V: ValueVector, beta) -> ValueVector:
    """``y_i(beta) = sum_j alpha_ij(beta) v_j``."""
    _check_values(A, V)
    w = softmax_weights(A, beta)
    return V._with_shape_of(w @ V.as_columns())


def hard_attention(A: TropicalMatrix, V: ValueVector) -> ValueVector:
    """The beta -> inf limit of :func:`attention_forward`.

    Each row returns ``v`` at its score argmax; on an exact tie the mean of
    the tied values, which is what the softmax average converges to.
    """
    _check_values(A, V)
    a = A.array
    m = _row_max(a)
    tied = (a == m[:, None]).astype(np.float64)
    out = (tied @ V.as_columns()) / tied.sum(axis=1, keepdims=True)
    return V._with_shape_of(out)


def log_space_attention(A: TropicalMatrix, V: ValueVector, beta) -> ValueVector:
    """Row-wise ``log_sum_exp`` of ``A_ij + v_j``; bottom terms drop out.

    Lies in ``[A ⊗ V, A ⊗ V + log(n)/beta]`` for every row.
    """
    beta = check_beta(beta, positive=True)
    if A.cols != V.len:
        raise DimensionMismatchError(f"matrix has {A.cols} columns but vector has length {V.len}")
    s = A.array[:, :, None] + V.as_columns()[None, :, :]
    m = _row_max(s)
    terms = np.exp(beta * (s - m[:, None, :]))
    out = m + np.log(terms.sum(axis=1)) / beta
    return V._with_shape_of(out)
