"""Labeling tricks for multi-node representation learning, with exact small-graph oracles."""

__version__ = "0.1.0"

from .graph import (Graph, GraphError, Hypergraph, NodePoset, Permutation, PosetError,
                    apply_permutation, cycle_graph, enclosing_subgraph, hasse_diagram,
                    incidence_graph, path_graph)
from .heuristics import (HeuristicDomainError, adamic_adar, common_neighbors,
                         heuristic_refinement_check, resource_allocation)
from .iso import are_substructures_isomorphic, canonical_code
from .labeling import (TRICKS, LabelingError, NodeLabeling, SubsetPolicy, de_plus, distance_encoding,
                       drnl, drnl_label, get_trick, hasse_embedding, linear_order_labels,
                       nearly_linear_order_labels, one_head_label, subset_pooling_distinguishes,
                       subset_zero_one, validate_labeling_trick, zero_one)
from .wl import (BudgetExceeded, ColorInterner, Coloring, kl_wl, kwl_l_pooling, kwl_refine,
                 wl_distinguishes, wl_refine)

__all__ = [
    "Graph", "GraphError", "Hypergraph", "NodePoset", "Permutation", "PosetError",
    "apply_permutation", "cycle_graph", "enclosing_subgraph", "hasse_diagram", "incidence_graph",
    "path_graph", "HeuristicDomainError", "adamic_adar", "common_neighbors",
    "heuristic_refinement_check", "resource_allocation", "are_substructures_isomorphic",
    "canonical_code", "TRICKS", "LabelingError", "NodeLabeling", "SubsetPolicy", "de_plus",
    "distance_encoding", "drnl", "drnl_label", "get_trick", "hasse_embedding",
    "linear_order_labels", "nearly_linear_order_labels", "one_head_label",
    "subset_pooling_distinguishes", "subset_zero_one", "validate_labeling_trick", "zero_one",
    "BudgetExceeded", "ColorInterner", "Coloring", "kl_wl", "kwl_l_pooling", "kwl_refine",
    "wl_distinguishes", "wl_refine", "__version__",
]
