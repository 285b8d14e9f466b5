"""Graphs as an ordered commutative monoid: x >= y iff there is a hom y -> x."""
from __future__ import annotations

import numpy as np

from ..core import Budget, MonoidInstance, TriState
from .graph import Graph, GraphHom, canonical_label, complete_graph, disjunctive_product
from .search import hom_search


class GraphInstance(MonoidInstance):
    name = "graph"
    complete = True  # hom_search only says No after an exhaustive argument

    @property
    def zero(self) -> Graph:
        return complete_graph(1)

    def combine(self, x: Graph, y: Graph) -> Graph:
        return disjunctive_product(x, y)

    def geq(self, x: Graph, y: Graph, budget: Budget | None = None) -> TriState:
        return hom_search(y, x, budget)

    def canonical(self, x: Graph):
        return (x.n, canonical_label(x).certificate)

    def verify(self, x: Graph, y: Graph, witness: GraphHom) -> bool:
        return witness.source.n == y.n and witness.target.n == x.n and witness.verify()

    def combine_witness(self, x1, y1, w1, x2, y2, w2) -> GraphHom:
        f1 = np.asarray(w1.mapping, dtype=np.int64)
        f2 = np.asarray(w2.mapping, dtype=np.int64)
        mapping = (f1[:, None] * x2.n + f2[None, :]).reshape(-1)
        return GraphHom(self.combine(y1, y2), self.combine(x1, x2), mapping)


def log2_theta(g: Graph) -> float:
    """log2 of theta(complement g): additive under products, monotone under homs."""
    import math

    from .invariants import lovasz_complement
    return math.log2(lovasz_complement(g, guard=10**6).upper)
