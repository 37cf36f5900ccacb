"""
Two limits that need not agree
==============================

As beta grows, softmax attention converges to the value at the row's
highest *score*.  The max-plus product instead picks the highest
*score + value*.  The two winners coincide in many cases (constant values,
for example) but not always.  ``theorem_gap_report`` says which rows agree,
and ``sweep`` measures how fast each limit is approached.
"""

import numpy as np

from tropatt import TropicalMatrix, ValueVector, sweep, theorem_gap_report
from tropatt.io import sweep_to_csv

###############################################################################
# A two-token example where they disagree.

A = TropicalMatrix([[1, 0], [0, 1]])
V = ValueVector([0, 5])
for r in theorem_gap_report(A, V):
    print(r)

###############################################################################
# Constant values: every row agrees.

rng = np.random.default_rng(1)
B = TropicalMatrix(rng.normal(size=(6, 6)))
print(all(r.agree for r in theorem_gap_report(B, ValueVector(np.full(6, 2.5)))))

###############################################################################
# Distances to both limits along a geometric beta schedule, as CSV.

print(sweep_to_csv(sweep(A, V, np.geomspace(0.5, 64, 8))))
