"""
From softmax to max as beta grows
=================================

Sharpening a softmax by an inverse temperature beta turns it into a hard
argmax; the log-sum-exp turns into a plain maximum.  This script prints
both effects on a small random instance.
"""

import math

import numpy as np

from tropatt import (
    EmbeddingSet,
    ValueVector,
    attention_forward,
    hard_attention,
    log_space_attention,
    log_sum_exp,
    score_matrix,
    softmax_weights,
    trop_matvec,
)

rng = np.random.default_rng(0)

###############################################################################
# log-sum-exp sits above the max by at most log(n)/beta.

x = np.array([1.0, 2.0, 3.0])
for beta in (1, 10, 100, 1000):
    lse = log_sum_exp(x, beta)
    print(f"beta={beta:>5}  lse={lse:.10f}  gap={lse - 3:.2e}  bound={math.log(3) / beta:.2e}")

###############################################################################
# Token embeddings give a score matrix A_ij = <q_i, k_j>.

n, d = 5, 3
E = EmbeddingSet(rng.normal(size=(n, d)), rng.normal(size=(n, d)), ValueVector(rng.normal(size=n)))
A = score_matrix(E)
V = E.values

###############################################################################
# Each softmax row concentrates on its largest score.

for beta in (0, 1, 10, 100):
    w = softmax_weights(A, beta)
    print(f"\nbeta={beta}: row 0 weights", np.round(w[0], 4))

###############################################################################
# The attention output approaches the value at each row's winning key ...

print("\nhard limit:", np.round(hard_attention(A, V).array, 6))
for beta in (1, 10, 100):
    print(f"beta={beta:>3}:  ", np.round(attention_forward(A, V, beta).array, 6))

###############################################################################
# ... while the log-space form approaches max_j (A_ij + v_j).

print("\nmax-plus product:", np.round(trop_matvec(A, V).array, 6))
for beta in (1, 10, 100):
    print(f"beta={beta:>3}:        ", np.round(log_space_attention(A, V, beta).array, 6))
