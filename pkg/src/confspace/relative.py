"""Relative cellular chain complex of the diagonal neighbourhood (N, dN).

The relative complex keeps exactly the product cells of G x G whose factors
meet: 2-cells ``(e, f)`` with ``e`` and ``f`` sharing a vertex (``e == f``
included), 1-cells ``("ve", v, e)`` / ``("ev", e, v)`` with ``v`` an endpoint of
``e``, and 0-cells ``(v, v)``.  Boundaries are the product-rule boundaries of
G x G with every cell lying in dN dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import HypothesisViolated
from .graph import Graph, validate, valence
from .linalg import (
    SmithDecomposition,
    cokernel_invariants,
    homology_from_boundaries,
    kernel_matrix,
    matmul_exact,
    smith_invariants,
    zeros,
)


@dataclass
class RelativeComplex:
    graph: Graph
    cells0: List[Tuple[str, str]]
    cells1: List[Tuple[str, str, str]]
    cells2: List[Tuple[str, str]]
    boundary1: np.ndarray
    boundary2: np.ndarray

    def __post_init__(self):
        self.index2 = {c: i for i, c in enumerate(self.cells2)}

    def boundary_squared_is_zero(self) -> bool:
        if not self.cells2 or not self.cells0:
            return True
        return not matmul_exact(self.boundary1, self.boundary2).any()


@dataclass
class RelativeH2:
    kernel_basis: np.ndarray
    """Columns are a saturated basis of ker(boundary2) in cells2 coordinates."""
    rank: int
    snf: SmithDecomposition

    def vectors(self) -> List[List[int]]:
        return [[int(x) for x in self.kernel_basis[:, k]] for k in range(self.rank)]


def build_relative_complex(graph: Graph) -> RelativeComplex:
    validate(graph)
    verts = sorted(graph.vertices)
    edges = sorted(graph.edges, key=lambda e: e.id)
    ends = {e.id: (e.tail, e.head) for e in edges}

    cells0 = [(v, v) for v in verts]
    cells1 = []
    for e in edges:
        for v in sorted(ends[e.id]):
            cells1.append(("ev", e.id, v))
    for v in verts:
        for e in edges:
            if v in ends[e.id]:
                cells1.append(("ve", v, e.id))
    cells2 = [
        (e.id, f.id)
        for e in edges
        for f in edges
        if set(ends[e.id]) & set(ends[f.id])
    ]

    idx0 = {c: i for i, c in enumerate(cells0)}
    idx1 = {c: i for i, c in enumerate(cells1)}
    d1 = zeros(len(cells0), len(cells1))
    for j, cell in enumerate(cells1):
        if cell[0] == "ev":
            e, v = graph.edge_map[cell[1]], cell[2]
        else:
            v, e = cell[1], graph.edge_map[cell[2]]
        # v x de or de x v, keeping only the diagonal point (v, v)
        d1[idx0[(v, v)], j] += 1 if v == e.head else -1
    d2 = zeros(len(cells1), len(cells2))
    for j, (a, b) in enumerate(cells2):
        e, f = graph.edge_map[a], graph.edge_map[b]
        for v, sign in ((e.head, 1), (e.tail, -1)):
            cell = ("ve", v, b)
            if cell in idx1:
                d2[idx1[cell], j] += sign
        for v, sign in ((f.head, -1), (f.tail, 1)):
            cell = ("ev", a, v)
            if cell in idx1:
                d2[idx1[cell], j] += sign
    return RelativeComplex(graph, cells0, cells1, cells2, d1, d2)


def relative_h2(complex: RelativeComplex) -> RelativeH2:
    """H_2(N, dN) as the kernel of the 2-dimensional boundary."""
    K, snf = kernel_matrix(complex.boundary2)
    return RelativeH2(K, K.shape[1], snf)


def relative_homology(complex: RelativeComplex):
    """Betti numbers and torsion of (N, dN) in degrees 0, 1, 2."""
    counts = [len(complex.cells0), len(complex.cells1), len(complex.cells2)]
    return homology_from_boundaries(counts, [complex.boundary1, complex.boundary2])


def rank_formula(graph: Graph) -> int:
    """b_1(G) - 1 + sum over vertices of (mu - 1)(mu - 2)."""
    cls = validate(graph)
    return cls.first_betti - 1 + sum(
        (valence(graph, v) - 1) * (valence(graph, v) - 2) for v in graph.vertices
    )


def rank_formula_check(graph: Graph, h2: RelativeH2, complex: RelativeComplex = None) -> bool:
    """True iff rank H_2(N, dN) matches the formula and H_0 = H_1 = 0.

    Raises :class:`HypothesisViolated` for disconnected graphs and for graphs
    homeomorphic to a circle or an interval, where the formula is false.
    """
    cls = validate(graph)
    if not cls.qualifies():
        raise HypothesisViolated(
            "rank formula needs a connected graph that is neither a circle nor an interval"
        )
    if complex is None:
        complex = build_relative_complex(graph)
    free0, tors0 = cokernel_invariants(complex.boundary1)
    r1 = len(smith_invariants(complex.boundary1))
    r2 = len(smith_invariants(complex.boundary2))
    h1_free = len(complex.cells1) - r1 - r2
    h1_torsion = [d for d in smith_invariants(complex.boundary2) if d > 1]
    return (
        h2.rank == rank_formula(graph)
        and free0 == 0
        and not tors0
        and h1_free == 0
        and not h1_torsion
    )
