"""
The Fisher metric near the edge of its domain
=============================================

For a graph with adjacency ``A`` the parameters ``theta`` live where
``diag(theta) + A`` is positive definite.  On a single edge that region is
``theta_0 * theta_1 > 1``.  The metric determinant blows up as the boundary
is approached, which is why the volume integral needs either a cutoff or a
regularizing factor.
"""

import numpy as np

from homent import Graph, fisher_metric, in_domain

g = Graph(2, frozenset({(0, 1)}))

print(in_domain([1.0, 1.0], g), in_domain([2.0, 1.0], g))

# walk toward theta_0 * theta_1 = 1 along theta_1 = 1
for gap in [1.0, 1e-1, 1e-2, 1e-4, 1e-8]:
    m = fisher_metric([1.0 + gap, 1.0], g)
    x = 1.0 + gap
    closed = (1 + x) / (4 * (x - 1) ** 3)
    print(f"gap {gap:8.0e}  det g = {m.det_g:.6e}  closed form {closed:.6e}")

# the metric is the Hadamard square of the inverse, halved
theta = np.array([2.0, 3.0])
inv = np.linalg.inv(np.diag(theta) + g.adjacency())
print(np.allclose(fisher_metric(theta, g).g_tilde, 0.5 * inv**2))
