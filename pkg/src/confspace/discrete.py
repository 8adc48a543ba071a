"""The discretized configuration space D(G, 2) as a cellular chain complex.

Cells are products of closed cells of the graph with disjoint supports:

* 0-cells ``(u, v)``: ordered pairs of distinct vertices;
* 1-cells ``("ev", e, v)`` (first particle on ``e``, second parked at ``v``)
  and ``("ve", v, e)``, where ``v`` is not an endpoint of ``e``;
* 2-cells ``(e, f)``: ordered pairs of vertex-disjoint edges.

Boundaries follow the product rule with ``d(e) = head - tail``:
``d(a x b) = da x b + (-1)^dim(a) a x db``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from .errors import HypothesisViolated
from .graph import Graph, spanning_tree, valence, validate
from .linalg import HomologySummary, homology_from_boundaries, matmul_exact, rank, zeros

Cell0 = Tuple[str, str]
Cell1 = Tuple[str, str, str]
Cell2 = Tuple[str, str]


@dataclass
class DiscreteConfigComplex:
    graph: Graph
    cells0: List[Cell0]
    cells1: List[Cell1]
    cells2: List[Cell2]
    boundary1: np.ndarray
    boundary2: np.ndarray

    def __post_init__(self):
        self.index0 = {c: i for i, c in enumerate(self.cells0)}
        self.index1 = {c: i for i, c in enumerate(self.cells1)}
        self.index2 = {c: i for i, c in enumerate(self.cells2)}

    @property
    def counts(self) -> Tuple[int, int, int]:
        return (len(self.cells0), len(self.cells1), len(self.cells2))

    @property
    def euler(self) -> int:
        c0, c1, c2 = self.counts
        return c0 - c1 + c2

    def chain1(self, terms: Mapping[Cell1, int]) -> np.ndarray:
        """Dense 1-chain vector from a ``{cell: coefficient}`` mapping."""
        vec = np.zeros(len(self.cells1), dtype=object)
        for cell, c in terms.items():
            vec[self.index1[cell]] += c
        return vec

    def boundary_squared_is_zero(self) -> bool:
        if not self.cells2 or not self.cells0:
            return True
        return not matmul_exact(self.boundary1, self.boundary2).any()


def build_discrete_config(graph: Graph) -> DiscreteConfigComplex:
    validate(graph)
    verts = sorted(graph.vertices)
    edges = sorted(graph.edges, key=lambda e: e.id)

    cells0 = [(u, v) for u in verts for v in verts if u != v]
    cells1: List[Cell1] = []
    for e in edges:
        for v in verts:
            if v not in (e.tail, e.head):
                cells1.append(("ev", e.id, v))
    for v in verts:
        for e in edges:
            if v not in (e.tail, e.head):
                cells1.append(("ve", v, e.id))
    cells2 = [
        (e.id, f.id)
        for e in edges
        for f in edges
        if not ({e.tail, e.head} & {f.tail, f.head})
    ]

    idx0 = {c: i for i, c in enumerate(cells0)}
    idx1 = {c: i for i, c in enumerate(cells1)}
    d1 = zeros(len(cells0), len(cells1))
    for j, cell in enumerate(cells1):
        if cell[0] == "ev":
            e = graph.edge_map[cell[1]]
            v = cell[2]
            d1[idx0[(e.head, v)], j] += 1
            d1[idx0[(e.tail, v)], j] -= 1
        else:
            v = cell[1]
            e = graph.edge_map[cell[2]]
            d1[idx0[(v, e.head)], j] += 1
            d1[idx0[(v, e.tail)], j] -= 1
    d2 = zeros(len(cells1), len(cells2))
    for j, (a, b) in enumerate(cells2):
        e = graph.edge_map[a]
        f = graph.edge_map[b]
        # (de) x f  -  e x (df)
        d2[idx1[("ve", e.head, b)], j] += 1
        d2[idx1[("ve", e.tail, b)], j] -= 1
        d2[idx1[("ev", a, f.head)], j] -= 1
        d2[idx1[("ev", a, f.tail)], j] += 1
    return DiscreteConfigComplex(graph, cells0, cells1, cells2, d1, d2)


def euler_characteristic_formula(graph: Graph) -> int:
    """chi(G)^2 + chi(G) - sum over vertices of (mu - 1)(mu - 2)."""
    chi = graph.n_vertices - graph.n_edges
    return chi * chi + chi - sum(
        (valence(graph, v) - 1) * (valence(graph, v) - 2) for v in graph.vertices
    )


def homology_oracle(complex: DiscreteConfigComplex) -> HomologySummary:
    """Integral homology of D(G, 2) straight from its boundary matrices."""
    return homology_from_boundaries(
        list(complex.counts), [complex.boundary1, complex.boundary2]
    )


def product_cochains(graph: Graph, complex: DiscreteConfigComplex, functionals: Sequence[Mapping[str, int]]):
    """Pull back ``u x 1`` and ``1 x u`` for each edge functional ``u``.

    Returns a matrix with ``2 * len(functionals)`` rows over the 1-cells of
    D(G, 2): first the ``u x 1`` rows, then the ``1 x u`` rows.
    """
    k = len(functionals)
    P = zeros(2 * k, len(complex.cells1))
    for j, cell in enumerate(complex.cells1):
        if cell[0] == "ev":
            for i, u in enumerate(functionals):
                P[i, j] = u.get(cell[1], 0)
        else:
            for i, u in enumerate(functionals):
                P[k + i, j] = u.get(cell[2], 0)
    return P


def inclusion_h1_rank(graph: Graph, complex: DiscreteConfigComplex) -> int:
    """Rank of H_1(D(G,2)) -> H_1(G x G) induced by the inclusion.

    The target is detected by the cocycles ``u x 1`` and ``1 x u`` where ``u``
    runs over the indicator functionals of the non-tree edges (these are dual
    to the fundamental cycles).  The rank of a cochain matrix ``P`` restricted
    to the cycles ``ker d1`` is ``rank([d1; P]) - rank(d1)``.
    """
    cls = validate(graph)
    if not cls.connected:
        raise HypothesisViolated("graph must be connected")
    if cls.circle_like:
        raise HypothesisViolated("graph is homeomorphic to the circle")
    tree = set(spanning_tree(graph))
    functionals = [{e.id: 1} for e in graph.edges if e.id not in tree]
    if not functionals:
        return 0
    P = product_cochains(graph, complex, functionals)
    stacked = np.vstack([complex.boundary1, P]) if complex.cells0 else P
    return rank(stacked) - rank(complex.boundary1)


def cycle_in_complex(complex: DiscreteConfigComplex, chain: np.ndarray) -> bool:
    return not matmul_exact(complex.boundary1, chain.reshape(-1, 1)).any()


__all__ = [
    "DiscreteConfigComplex",
    "build_discrete_config",
    "euler_characteristic_formula",
    "homology_oracle",
    "inclusion_h1_rank",
    "product_cochains",
    "cycle_in_complex",
]
