"""Planar graphs: faces, disjoint face pairs, torus classes and H_1 generators.

A planar embedding is given combinatorially by a rotation system (the
counterclockwise order of edges around each vertex) plus a marker naming one
directed edge with the unbounded face on its left.  Faces are traced keeping
the face on the left, so bounded faces come out anticlockwise and the outer
walk clockwise; the outer face cycle ``z_0`` is the negated outer walk, which
makes ``z_0 = z_1 + ... + z_r`` hold exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .discrete import DiscreteConfigComplex, build_discrete_config
from .errors import (
    BadOuterMarker,
    BadRotation,
    Disconnected,
    EulerMismatch,
    HypothesisViolated,
    NoEssentialVertex,
    NoOffBoundaryVertex,
    NotACycle,
)
from .graph import EdgeChain, Graph, components, valence, validate
from .intersection import IntersectionMatrix
from .linalg import (
    is_zero,
    kernel_coordinates,
    kernel_matrix,
    matmul_exact,
    rank,
    determinant,
    zeros,
)

log = logging.getLogger(__name__)

Dart = Tuple[str, int]
"""``(edge_id, +1)`` runs tail -> head, ``(edge_id, -1)`` head -> tail."""


def dart_origin(graph: Graph, d: Dart) -> str:
    e = graph.edge_map[d[0]]
    return e.tail if d[1] > 0 else e.head


def dart_target(graph: Graph, d: Dart) -> str:
    e = graph.edge_map[d[0]]
    return e.head if d[1] > 0 else e.tail


@dataclass
class PlanarStructure:
    graph: Graph
    rotations: Dict[str, Tuple[str, ...]]
    faces: List[List[Dart]]
    """Boundary walks; ``faces[0]`` is the outer face, as traced."""
    face_vertices: List[List[str]]
    face_cycles: List[EdgeChain]
    """``z_0`` (outer, anticlockwise around the graph) then ``z_1 .. z_r``."""
    outer_index: int = 0

    @property
    def r(self) -> int:
        return len(self.faces) - 1

    @property
    def bounded_cycles(self) -> List[EdgeChain]:
        return self.face_cycles[1:]

    def face_edges(self, i: int) -> set:
        return {d[0] for d in self.faces[i]}


def _check_rotations(graph: Graph, rotations) -> Dict[str, Tuple[str, ...]]:
    if rotations is None:
        raise BadRotation("no rotation system supplied")
    rot = {}
    for v in graph.vertices:
        cyc = tuple(rotations.get(v, ()))
        if sorted(cyc) != sorted(graph.incidence[v]):
            raise BadRotation(f"rotation at {v!r} must list each incident edge exactly once")
        rot[v] = cyc
    extra = set(rotations) - set(graph.vertices)
    if extra:
        raise BadRotation(f"rotation given for unknown vertices {sorted(extra)}")
    return rot


def trace_walks(graph: Graph, rotations) -> List[List[Dart]]:
    """All face boundary walks, discovered by scanning darts in sorted order."""
    rot = _check_rotations(graph, rotations)
    pos = {v: {e: k for k, e in enumerate(cyc)} for v, cyc in rot.items()}

    def following(d: Dart) -> Dart:
        b = dart_target(graph, d)
        cyc = rot[b]
        # clockwise neighbour of the edge we arrived on: a left turn
        eid = cyc[(pos[b][d[0]] - 1) % len(cyc)]
        return (eid, 1 if graph.edge_map[eid].tail == b else -1)

    darts = sorted((e.id, s) for e in graph.edges for s in (1, -1))
    seen = set()
    walks = []
    for d0 in sorted(darts, key=lambda d: (d[0], -d[1])):
        if d0 in seen:
            continue
        walk = []
        d = d0
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = following(d)
        if d != d0:
            raise BadRotation("face tracing did not close up")
        walks.append(walk)
    return walks


def walk_chain(walk: Sequence[Dart]) -> EdgeChain:
    chain: EdgeChain = {}
    for eid, s in walk:
        chain[eid] = chain.get(eid, 0) + s
    return {k: v for k, v in chain.items() if v}


def trace_faces(graph: Graph, rotations=None, outer_marker=None) -> PlanarStructure:
    """Trace the faces of an embedded connected graph.

    ``rotations`` and ``outer_marker`` default to the graph's own embedding
    fields.  ``outer_marker`` is ``(edge_id, "forward" | "reverse")``.
    """
    rotations = graph.rotations if rotations is None else rotations
    outer_marker = graph.outer_face if outer_marker is None else outer_marker
    if len(components(graph)) != 1:
        raise Disconnected("face tracing needs a connected graph")
    rot = _check_rotations(graph, rotations)

    if graph.n_edges == 0:
        only = list(graph.vertices)
        return PlanarStructure(graph, rot, [[]], [only], [{}])

    walks = trace_walks(graph, rot)
    expected = graph.n_edges - graph.n_vertices + 2
    if len(walks) != expected:
        raise EulerMismatch(
            f"traced {len(walks)} faces, a planar embedding has {expected}"
        )

    if outer_marker is None:
        raise BadOuterMarker("the outer face must be designated")
    eid, direction = outer_marker
    if eid not in graph.edge_map or direction not in ("forward", "reverse"):
        raise BadOuterMarker(f"bad outer face marker {outer_marker!r}")
    marker: Dart = (eid, 1 if direction == "forward" else -1)
    outer = next(k for k, w in enumerate(walks) if marker in w)

    ordered = [walks[outer]] + [w for k, w in enumerate(walks) if k != outer]
    fverts = []
    for w in ordered:
        seen_v = []
        for d in w:
            v = dart_origin(graph, d)
            if v not in seen_v:
                seen_v.append(v)
        fverts.append(seen_v)
    outer_chain = {k: -v for k, v in walk_chain(ordered[0]).items()}
    cycles = [outer_chain] + [walk_chain(w) for w in ordered[1:]]
    return PlanarStructure(graph, rot, ordered, fverts, cycles)


def sum_of_bounded(ps: PlanarStructure) -> EdgeChain:
    total: EdgeChain = {}
    for z in ps.bounded_cycles:
        for k, v in z.items():
            total[k] = total.get(k, 0) + v
    return {k: v for k, v in total.items() if v}


# --------------------------------------------------------------------------
# Disjoint face pairs and torus classes
# --------------------------------------------------------------------------

@dataclass
class DisjointPairSet:
    pairs: List[Tuple[int, int]]

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, item):
        return tuple(item) in set(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def disjoint_pairs(ps: PlanarStructure) -> DisjointPairSet:
    """Ordered pairs of distinct faces whose closures do not meet."""
    vsets = [set(v) for v in ps.face_vertices]
    n = len(vsets)
    return DisjointPairSet(
        [(i, j) for i in range(n) for j in range(n) if i != j and not (vsets[i] & vsets[j])]
    )


def face_vector(i: int, r: int) -> np.ndarray:
    """Coordinates of z_i in the bounded basis z_1..z_r (z_0 is all ones)."""
    v = np.zeros(r, dtype=object)
    if i == 0:
        v[:] = 1
    else:
        v[i - 1] = 1
    return v


def torus_tensor(i: int, j: int, r: int) -> np.ndarray:
    return np.array(np.outer(face_vector(i, r), face_vector(j, r)), dtype=object)


@dataclass
class TorusBasisResult:
    in_kernel: bool
    independent: bool
    count_matches: bool
    unimodular: Optional[bool]
    nullity: int
    count: int

    @property
    def ok(self) -> bool:
        return self.in_kernel and self.independent and self.count_matches


def torus_basis_report(ps: PlanarStructure, pairs: DisjointPairSet, im: IntersectionMatrix) -> TorusBasisResult:
    r = ps.r
    if im.r != r:
        raise ValueError("intersection matrix must be built on the bounded face basis")
    tensors = [torus_tensor(i, j, r).ravel() for i, j in pairs]
    nullity = r * r - rank(im.matrix) if r else 0
    if not tensors:
        return TorusBasisResult(True, True, nullity == 0, nullity == 0 or None, nullity, 0)
    T = zeros(r * r, len(tensors))
    for k, t in enumerate(tensors):
        T[:, k] = t
    in_kernel = is_zero(matmul_exact(im.matrix, T))
    independent = rank(T) == len(tensors)
    count_matches = len(tensors) == nullity
    unimodular = None
    if in_kernel and independent and count_matches:
        K, snf = kernel_matrix(im.h2_coordinates)
        C = kernel_coordinates(snf, T)
        unimodular = abs(determinant(C)) == 1
    return TorusBasisResult(in_kernel, independent, count_matches, unimodular, nullity, len(tensors))


def torus_basis_check(ps: PlanarStructure, pairs: DisjointPairSet, im: IntersectionMatrix) -> bool:
    """Torus tensors lie in ker I, are independent, and as many as its nullity."""
    return torus_basis_report(ps, pairs, im).ok


def torus_two_cycle(ps: PlanarStructure, complex: DiscreteConfigComplex, i: int, j: int) -> np.ndarray:
    """The torus dU_i x dU_j as a 2-chain of D(G, 2)."""
    vec = np.zeros(len(complex.cells2), dtype=object)
    for e, a in ps.face_cycles[i].items():
        for f, b in ps.face_cycles[j].items():
            vec[complex.index2[(e, f)]] += a * b
    return vec


# --------------------------------------------------------------------------
# Hypotheses of the Betti number formulas
# --------------------------------------------------------------------------

@dataclass
class Thm3Hypotheses:
    valence: bool
    simple_boundaries: bool
    connected_intersections: bool
    low_valence_vertices: List[str] = field(default_factory=list)
    nonsimple_faces: List[int] = field(default_factory=list)
    disconnected_pairs: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return self.valence and self.simple_boundaries and self.connected_intersections

    def as_dict(self) -> dict:
        return {
            "valence": self.valence,
            "simple_boundaries": self.simple_boundaries,
            "connected_intersections": self.connected_intersections,
            "all_pass": self.all_pass,
        }


def _walk_is_simple(graph: Graph, walk: Sequence[Dart]) -> bool:
    origins = [dart_origin(graph, d) for d in walk]
    return len(walk) >= 3 and len(set(origins)) == len(origins)


def check_thm3_hypotheses(ps: PlanarStructure, graph: Graph) -> Thm3Hypotheses:
    low = [v for v in graph.vertices if valence(graph, v) < 3]
    nonsimple = [k for k, w in enumerate(ps.faces) if not _walk_is_simple(graph, w)]
    broken = []
    n = len(ps.faces)
    vsets = [set(v) for v in ps.face_vertices]
    esets = [ps.face_edges(k) for k in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            common_v = vsets[i] & vsets[j]
            if not common_v:
                continue
            common_e = esets[i] & esets[j]
            if not _is_connected(graph, common_v, common_e):
                broken.append((i, j))
    return Thm3Hypotheses(
        valence=not low,
        simple_boundaries=not nonsimple,
        connected_intersections=not broken,
        low_valence_vertices=low,
        nonsimple_faces=nonsimple,
        disconnected_pairs=broken,
    )


def _is_connected(graph: Graph, verts: set, edges: set) -> bool:
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for eid in graph.incidence[v]:
            if eid not in edges:
                continue
            w = graph.edge_map[eid].other(v)
            if w in verts and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == verts


def betti_via_thm3(ps: PlanarStructure, graph: Graph, hyp: Thm3Hypotheses = None) -> Tuple[int, int]:
    """(2 b_1 + 1, b_1^2 - b_1 + 2 - sum (mu - 1)(mu - 2)) when the hypotheses hold."""
    hyp = check_thm3_hypotheses(ps, graph) if hyp is None else hyp
    if not hyp.all_pass:
        raise HypothesisViolated(f"Betti formulas do not apply: {hyp.as_dict()}")
    b = validate(graph).first_betti
    s = sum((valence(graph, v) - 1) * (valence(graph, v) - 2) for v in graph.vertices)
    return 2 * b + 1, b * b - b + 2 - s


# --------------------------------------------------------------------------
# Explicit H_1 generators
# --------------------------------------------------------------------------

@dataclass
class GeneratorCycles:
    labels: List[str]
    cycles: List[np.ndarray]
    """1-chains of D(G, 2), in ``labels`` order."""
    stationary: Dict[int, str]
    """Face index -> the vertex parked while the other particle circles it."""
    triple: Tuple[str, Tuple[str, str, str]]
    rank: int

    def matrix(self) -> np.ndarray:
        M = zeros(len(self.cycles[0]) if self.cycles else 0, len(self.cycles))
        for k, c in enumerate(self.cycles):
            M[:, k] = c
        return M


def circulate(complex: DiscreteConfigComplex, chain: EdgeChain, v: str, first: bool) -> np.ndarray:
    """The cycle ``c v`` (``first=True``) or ``v c`` of D(G, 2)."""
    terms = {}
    for eid, c in chain.items():
        cell = ("ev", eid, v) if first else ("ve", v, eid)
        if cell not in complex.index1:
            raise NoOffBoundaryVertex(f"vertex {v!r} touches edge {eid!r}")
        terms[cell] = terms.get(cell, 0) + c
    return complex.chain1(terms)


def triple_cycle(graph: Graph, complex: DiscreteConfigComplex, u: str, edges: Sequence[str]) -> np.ndarray:
    """sum over permutations (ijk) of sign * (v_i e_j + e_j v_i).

    The three edges are taken oriented towards ``u``; ``v_i`` is the far end
    of the i-th edge.
    """
    toward = []
    for eid in edges:
        e = graph.edge(eid)
        toward.append((eid, 1 if e.head == u else -1, e.other(u)))
    terms: Dict[tuple, int] = {}
    perms = [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
             ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)]
    for (i, j, _), sign in perms:
        far_i = toward[i][2]
        ej, sj, _ = toward[j]
        for cell in (("ve", far_i, ej), ("ev", ej, far_i)):
            terms[cell] = terms.get(cell, 0) + sign * sj
    return complex.chain1({k: v for k, v in terms.items() if v})


def choose_triple(graph: Graph) -> Tuple[str, Tuple[str, str, str]]:
    """Smallest essential vertex and its three smallest incident edge ids."""
    ess = sorted(v for v in graph.vertices if valence(graph, v) >= 3)
    if not ess:
        raise NoEssentialVertex("graph has no vertex of valence >= 3")
    u = ess[0]
    return u, tuple(sorted(graph.incidence[u])[:3])


def h1_generator_cycles(
    ps: PlanarStructure, graph: Graph, complex: Optional[DiscreteConfigComplex] = None
) -> GeneratorCycles:
    """Cycles ``c_i v_i``, ``v_i c_i`` for each bounded face plus one triple cycle.

    ``v_i`` is the smallest vertex off the boundary of face ``i``.  Every chain
    is checked to be a cycle, and the rank of their classes in H_1(D; Q) is
    computed as ``rank([d2 | G]) - rank(d2)``.
    """
    if complex is None:
        complex = build_discrete_config(graph)
    u, triple_edges = choose_triple(graph)
    labels, first_kind, second_kind = [], [], []
    stationary = {}
    for i in range(1, ps.r + 1):
        off = sorted(set(graph.vertices) - set(ps.face_vertices[i]))
        if not off:
            raise NoOffBoundaryVertex(f"every vertex lies on the boundary of face {i}")
        v = off[0]
        stationary[i] = v
        first_kind.append((f"c{i}v{i}", circulate(complex, ps.face_cycles[i], v, True)))
        second_kind.append((f"v{i}c{i}", circulate(complex, ps.face_cycles[i], v, False)))
    gens = first_kind + second_kind + [("triple", triple_cycle(graph, complex, u, triple_edges))]
    labels = [g[0] for g in gens]
    cycles = [g[1] for g in gens]
    G = zeros(len(complex.cells1), len(cycles))
    for k, c in enumerate(cycles):
        G[:, k] = c
    if complex.cells0 and not is_zero(matmul_exact(complex.boundary1, G)):
        raise NotACycle("a generator chain is not a cycle of D(G, 2)")
    base = rank(complex.boundary2) if complex.cells2 else 0
    both = np.hstack([complex.boundary2, G]) if complex.cells2 else G
    return GeneratorCycles(labels, cycles, stationary, (u, triple_edges), rank(both) - base)


# --------------------------------------------------------------------------
# Report
# --------------------------------------------------------------------------

@dataclass
class PlanarBettiReport:
    b2_htwo: int
    torus_tensors: List[np.ndarray]
    thm3_hypotheses: Thm3Hypotheses
    b1_thm3: Optional[int]
    b2_thm3: Optional[int]

    def as_dict(self) -> dict:
        return {
            "b2_htwo": self.b2_htwo,
            "thm3_hypotheses": self.thm3_hypotheses.as_dict(),
            "b1_thm3": self.b1_thm3,
            "b2_thm3": self.b2_thm3,
            "torus_tensors": [[[int(x) for x in row] for row in t] for t in self.torus_tensors],
        }


def planar_betti_report(ps: PlanarStructure, graph: Graph, pairs: DisjointPairSet = None) -> PlanarBettiReport:
    pairs = disjoint_pairs(ps) if pairs is None else pairs
    hyp = check_thm3_hypotheses(ps, graph)
    b1 = b2 = None
    if hyp.all_pass:
        b1, b2 = betti_via_thm3(ps, graph, hyp)
        if b2 != len(pairs):
            log.warning("pair count %d disagrees with the Betti formula %d", len(pairs), b2)
    return PlanarBettiReport(
        b2_htwo=len(pairs),
        torus_tensors=[torus_tensor(i, j, ps.r) for i, j in pairs],
        thm3_hypotheses=hyp,
        b1_thm3=b1,
        b2_thm3=b2,
    )


# --------------------------------------------------------------------------
# Embeddings from straight-line drawings
# --------------------------------------------------------------------------

def rotations_from_coordinates(graph: Graph, coords) -> Dict[str, Tuple[str, ...]]:
    """Counterclockwise edge order at each vertex of a straight-line drawing."""
    import math

    rot = {}
    for v in graph.vertices:
        x0, y0 = coords[v]

        def angle(eid, v=v, x0=x0, y0=y0):
            x1, y1 = coords[graph.edge_map[eid].other(v)]
            return math.atan2(y1 - y0, x1 - x0)

        rot[v] = tuple(sorted(graph.incidence[v], key=angle))
    return rot


def _signed_area(graph: Graph, walk: Sequence[Dart], coords) -> float:
    total = 0.0
    for d in walk:
        x0, y0 = coords[dart_origin(graph, d)]
        x1, y1 = coords[dart_target(graph, d)]
        total += x0 * y1 - x1 * y0
    return total / 2


def embed_with_coordinates(graph: Graph, coords) -> Graph:
    """Attach the rotation system and outer face marker of a planar drawing.

    The outer face is the one whose left-hand walk has the most negative
    signed area (it runs clockwise around the drawing).
    """
    rot = rotations_from_coordinates(graph, coords)
    if graph.n_edges == 0:
        return graph.with_embedding(rot, None)
    walks = trace_walks(graph, rot)
    outer = min(walks, key=lambda w: (_signed_area(graph, w, coords), min(w)))
    eid, s = min(outer)
    return graph.with_embedding(rot, (eid, "forward" if s > 0 else "reverse"))
