"""
Betti numbers of small clique complexes
=======================================

Build the clique complex of a few five-vertex graphs and read off how many
components and independent loops each has.  A triangle is filled in by its
2-simplex, so it does not count as a loop; a four-cycle is not, so it does.
"""

from homent import Graph, betti_numbers, clique_complex, summarize

graphs = {
    "single edge": [(0, 1)],
    "path on five vertices": [(0, 1), (1, 2), (2, 3), (3, 4)],
    "triangle": [(0, 1), (1, 2), (0, 2)],
    "square": [(0, 1), (1, 2), (2, 3), (0, 3)],
    "pentagon": [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
}

for name, edges in graphs.items():
    g = Graph(5, frozenset(edges))
    k = clique_complex(g, 3)
    s = summarize(k)
    beta = betti_numbers(k, 1).beta
    print(f"{name:24s} nu={s.nu}  dim={s.dim}  chi={s.chi}  beta={beta}")

# The Euler characteristic is the alternating sum of either sequence, so the
# simplex counts constrain the Betti numbers without any linear algebra.
