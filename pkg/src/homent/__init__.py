"""Betti numbers of clique complexes and geometric entropy of graphs."""

__version__ = "0.1.0"

from .complex import (ComplexSummary, SimplicialComplex, clique_complex,  # noqa: E402
                      euler_characteristic, maximal_cliques, summarize)
from .entropy import (EntropyEstimate, IntegrationConfig, entropy_per_node,  # noqa: E402
                      mc_volume, regularizer)
from .graph import (Graph, generate_gnk, generate_power_law, parse_edge_list,  # noqa: E402
                    permute, serialize_edge_list)
from .homology import (BettiVector, BoundaryMatrix, betti_numbers,  # noqa: E402
                       boundary_matrix, connected_components, cycle_rank)
from .infogeo import (MetricEvaluation, fisher_metric, in_domain, psi)  # noqa: E402

__all__ = [
    "BettiVector", "BoundaryMatrix", "ComplexSummary", "EntropyEstimate", "Graph",
    "IntegrationConfig", "MetricEvaluation", "SimplicialComplex", "betti_numbers",
    "boundary_matrix", "clique_complex", "connected_components", "cycle_rank",
    "entropy_per_node", "euler_characteristic", "fisher_metric", "generate_gnk",
    "generate_power_law", "in_domain", "maximal_cliques", "mc_volume", "parse_edge_list",
    "permute", "psi", "regularizer", "serialize_edge_list", "summarize",
]
