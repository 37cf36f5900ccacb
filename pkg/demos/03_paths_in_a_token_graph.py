"""
Stacked layers pick the best path
=================================

Four tokens, five weighted edges.  Two max-plus layers compare every
two-hop route into token 3 and keep the heaviest one.
"""

from tropatt import (
    ValueVector,
    add_self_loops,
    bellman_ford_step,
    enumerate_paths,
    export_dot,
    fig2,
    reconstruct_path,
    trop_power,
)

G = fig2()
start = ValueVector.unit(G.n, 0)  # 0 at token 0, bottom elsewhere

###############################################################################
# Edges are stored column -> row: the edge 0 -> 1 lives at weights[1, 0].

print("weights:", G.weights.to_nested())

###############################################################################
# Each layer is one relaxation step.

d1 = bellman_ford_step(start, G)
d2 = bellman_ford_step(d1, G)
print("after 1 layer :", d1.to_nested())
print("after 2 layers:", d2.to_nested())
print("(A^2)[3, 0]   =", trop_power(G.weights, 2)[3, 0])

###############################################################################
# Brute force agrees with the recurrence.

for p in enumerate_paths(G, start, 2, 3):
    print("  path", p.nodes, "weight", p.total_weight)
best = reconstruct_path(G.weights, start, 2, 3)
print("best:", best.nodes, best.total_weight)

###############################################################################
# Allowing a token to stay put lets the direct edge compete with two-hop routes.

stay = add_self_loops(G)
for p in enumerate_paths(stay, start, 2, 3):
    print("  path", p.nodes, "weight", p.total_weight)

###############################################################################
# Graphviz source with the winning route highlighted; pipe into `dot -Tpng`.

print(export_dot(G, best))
