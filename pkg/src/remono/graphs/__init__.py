from .catalyst import CatalystResult, catalyst, distribute_catalyst
from .graph import (CanonicalForm, Graph, GraphHom, canonical_label, complement, complete_graph,
                    cycle_graph, disjunctive_product, empty_graph, format_dimacs, isomorphic, join,
                    parse_dimacs, path_graph, power, random_graph, relabel, verify_hom)
from .instance import GraphInstance, log2_theta
from .invariants import (LovaszResult, SandwichReport, capacity_bounds, fractional_chromatic,
                         lovasz_complement, maximal_independent_sets, sandwich_check)
from .search import (chromatic_number, clique_number, find_clique, hom_search, max_clique,
                     structured_clique)

__all__ = [
    "CatalystResult", "catalyst", "distribute_catalyst", "CanonicalForm", "Graph", "GraphHom",
    "canonical_label", "complement", "complete_graph", "cycle_graph", "disjunctive_product",
    "empty_graph", "format_dimacs", "isomorphic", "join", "parse_dimacs", "path_graph", "power",
    "random_graph", "relabel", "verify_hom", "GraphInstance", "log2_theta", "LovaszResult",
    "SandwichReport", "capacity_bounds", "fractional_chromatic", "lovasz_complement",
    "maximal_independent_sets", "sandwich_check", "chromatic_number", "clique_number",
    "find_clique", "hom_search", "max_clique", "structured_clique",
]
