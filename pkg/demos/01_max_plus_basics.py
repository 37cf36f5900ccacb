"""
Max-plus arithmetic in a few lines
==================================

Scalars, matrices and the one rule everything else builds on:
"add" means max, "multiply" means +.
"""

import numpy as np

from tropatt import (
    BOTTOM,
    TropicalMatrix,
    TropicalScalar,
    ValueVector,
    trop_add,
    trop_leq,
    trop_matmul,
    trop_matvec,
    trop_mul,
)

###############################################################################
# Scalars.  Bottom plays the role of zero: it vanishes under max and absorbs
# under +.

a, b = TropicalScalar(3), TropicalScalar(5)
print("3 (+) 5      =", trop_add(a, b))
print("3 (x) 5      =", trop_mul(a, b))
print("3 (+) 3      =", trop_add(a, a), "(idempotent)")
print("-inf (+) 4   =", trop_add(BOTTOM, 4))
print("-inf (x) 7   =", trop_mul(BOTTOM, 7))
print("2 <= 5 ?      ", trop_leq(2, 5))

###############################################################################
# Matrices.  Missing entries are bottom; write them as None.

A = TropicalMatrix([[0, 2], [1, None]])
V = ValueVector([1, 0])
print("\nA =", A.to_nested())
print("A (x) V =", trop_matvec(A, V).to_nested())

###############################################################################
# The identity has 0 on the diagonal and bottom elsewhere.

I = TropicalMatrix.identity(2)
print("I (x) A == A:", trop_matmul(I, A) == A)

###############################################################################
# Everything is plain numpy underneath; bottom shows up as -inf.

print("\nraw storage:\n", np.asarray(A.array))
