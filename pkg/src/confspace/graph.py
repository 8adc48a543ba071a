"""Finite simple graphs with oriented edges.

A :class:`Graph` is the one-dimensional simplicial complex everything else in
the package is built from.  Edge orientation (tail -> head) is part of the
data; the boundary of an edge is ``head - tail``.  A planar embedding, when
present, rides along as ``rotations`` (counterclockwise cyclic order of edge
ids at every vertex) and ``outer_face`` (a directed edge whose left side is the
unbounded face).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from .errors import (
    Disconnected,
    MalformedGraph,
    UnknownEdge,
    UnknownVertex,
    ZeroParts,
)

EdgeChain = Dict[str, int]
"""Sparse integer 1-chain: edge id -> coefficient (absent means 0)."""


class Edge(NamedTuple):
    id: str
    tail: str
    head: str

    def endpoints(self) -> Tuple[str, str]:
        return (self.tail, self.head)

    def other(self, v: str) -> str:
        if v == self.tail:
            return self.head
        if v == self.head:
            return self.tail
        raise UnknownVertex(f"{v!r} is not an endpoint of edge {self.id!r}")


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    rotations: Optional[Mapping[str, Tuple[str, ...]]] = field(default=None, compare=False)
    outer_face: Optional[Tuple[str, str]] = field(default=None, compare=False)

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple(Edge(str(e[0]), str(e[1]), str(e[2])) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if self.rotations is not None:
            rot = {str(v): tuple(str(e) for e in es) for v, es in self.rotations.items()}
            object.__setattr__(self, "rotations", rot)
        if self.outer_face is not None:
            edge_id, direction = self.outer_face
            object.__setattr__(self, "outer_face", (str(edge_id), str(direction)))
        _check_simple(vertices, edges)

    # lookups are rebuilt lazily; the dataclass is frozen so caching is safe
    @property
    def edge_map(self) -> Dict[str, Edge]:
        cached = self.__dict__.get("_edge_map")
        if cached is None:
            cached = {e.id: e for e in self.edges}
            object.__setattr__(self, "_edge_map", cached)
        return cached

    @property
    def incidence(self) -> Dict[str, List[str]]:
        """Vertex id -> ids of incident edges, in edge-list order."""
        cached = self.__dict__.get("_incidence")
        if cached is None:
            cached = {v: [] for v in self.vertices}
            for e in self.edges:
                cached[e.tail].append(e.id)
                cached[e.head].append(e.id)
            object.__setattr__(self, "_incidence", cached)
        return cached

    def edge(self, edge_id: str) -> Edge:
        try:
            return self.edge_map[edge_id]
        except KeyError:
            raise UnknownEdge(edge_id) from None

    def has_vertex(self, v: str) -> bool:
        return v in self.incidence

    def neighbors(self, v: str) -> List[str]:
        return [self.edge_map[e].other(v) for e in self.incidence[v]]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def with_embedding(self, rotations, outer_face=None) -> "Graph":
        return Graph(self.vertices, self.edges, rotations, outer_face)


def _check_simple(vertices, edges):
    if len(set(vertices)) != len(vertices):
        raise MalformedGraph("duplicate vertex ids")
    vset = set(vertices)
    seen_ids = set()
    seen_pairs = set()
    for e in edges:
        if e.id in seen_ids:
            raise MalformedGraph(f"duplicate edge id {e.id!r}")
        seen_ids.add(e.id)
        if e.tail not in vset or e.head not in vset:
            raise MalformedGraph(f"edge {e.id!r} has an endpoint that is not a vertex")
        if e.tail == e.head:
            raise MalformedGraph(f"edge {e.id!r} is a loop")
        pair = frozenset((e.tail, e.head))
        if pair in seen_pairs:
            raise MalformedGraph(f"edge {e.id!r} is parallel to another edge")
        seen_pairs.add(pair)


@dataclass(frozen=True)
class GraphClassification:
    connected: bool
    circle_like: bool
    interval_like: bool
    essential_vertices: List[str]
    first_betti: int
    euler: int

    def qualifies(self) -> bool:
        """Connected and homeomorphic to neither the circle nor the interval."""
        return self.connected and not self.circle_like and not self.interval_like


def components(graph: Graph) -> List[List[str]]:
    """Connected components as vertex lists, each in discovery order."""
    seen = set()
    comps = []
    for start in sorted(graph.vertices):
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in sorted(graph.neighbors(v)):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def valence(graph: Graph, v: str) -> int:
    try:
        return len(graph.incidence[v])
    except KeyError:
        raise UnknownVertex(v) from None


def first_betti(graph: Graph) -> int:
    return graph.n_edges - graph.n_vertices + len(components(graph))


def validate(graph: Graph) -> GraphClassification:
    """Classify ``graph`` against the standing hypotheses.

    Raises :class:`MalformedGraph` if the graph is not simple (this can only
    happen for objects built around the constructor).
    """
    _check_simple(graph.vertices, graph.edges)
    n_comp = len(components(graph))
    connected = n_comp == 1
    mu = {v: valence(graph, v) for v in graph.vertices}
    b1 = graph.n_edges - graph.n_vertices + n_comp
    circle_like = connected and graph.n_vertices > 0 and all(m == 2 for m in mu.values())
    ends = sum(1 for m in mu.values() if m == 1)
    interval_like = connected and b1 == 0 and (
        graph.n_vertices == 1 or (all(m <= 2 for m in mu.values()) and ends == 2)
    )
    return GraphClassification(
        connected=connected,
        circle_like=circle_like,
        interval_like=interval_like,
        essential_vertices=[v for v in graph.vertices if mu[v] >= 3],
        first_betti=b1,
        euler=graph.n_vertices - graph.n_edges,
    )


def subdivide(graph: Graph, per_edge: Mapping[str, int] | int) -> Graph:
    """Replace every edge ``e`` by a path of ``per_edge[e]`` edges.

    Fresh vertices are named ``"<edge>~<k>"`` and fresh edges ``"<edge>~e<k>"``
    (k counted from the tail).  Edges missing from ``per_edge`` are kept.  A
    rotation system, if present, is carried over.
    """
    if isinstance(per_edge, int):
        per_edge = {e.id: per_edge for e in graph.edges}
    for eid, k in per_edge.items():
        if eid not in graph.edge_map:
            raise UnknownEdge(eid)
        if k < 1:
            raise ZeroParts(f"edge {eid!r} subdivided into {k} parts")
    vertices = list(graph.vertices)
    edges = []
    # which new edge id touches each old endpoint
    end_piece = {}
    rotations = {} if graph.rotations is not None else None
    for e in graph.edges:
        k = per_edge.get(e.id, 1)
        if k == 1:
            edges.append(e)
            end_piece[e.id] = (e.id, e.id)
            continue
        chain = [e.tail] + [f"{e.id}~{i}" for i in range(1, k)] + [e.head]
        vertices.extend(chain[1:-1])
        pieces = [f"{e.id}~e{i}" for i in range(1, k + 1)]
        for i, pid in enumerate(pieces):
            edges.append(Edge(pid, chain[i], chain[i + 1]))
        for i in range(1, k):
            if rotations is not None:
                rotations[chain[i]] = (pieces[i - 1], pieces[i])
        end_piece[e.id] = (pieces[0], pieces[-1])
    outer = graph.outer_face
    if graph.rotations is not None:
        for v, cyc in graph.rotations.items():
            new = []
            for eid in cyc:
                first, last = end_piece[eid]
                new.append(first if graph.edge(eid).tail == v else last)
            rotations[v] = tuple(new)
        if outer is not None:
            eid, direction = outer
            first, last = end_piece[eid]
            outer = (first if direction == "forward" else last, direction)
    return Graph(tuple(vertices), tuple(edges), rotations, outer)


def chain_boundary(graph: Graph, chain: Mapping[str, int]) -> Dict[str, int]:
    """Signed vertex incidence of a 1-chain; zero entries dropped."""
    out: Dict[str, int] = {}
    for eid, c in chain.items():
        e = graph.edge(eid)
        out[e.head] = out.get(e.head, 0) + c
        out[e.tail] = out.get(e.tail, 0) - c
    return {v: c for v, c in out.items() if c}


def is_cycle(graph: Graph, chain: Mapping[str, int]) -> bool:
    return not chain_boundary(graph, chain)


def spanning_tree(graph: Graph, root: Optional[str] = None) -> List[str]:
    """Edge ids of a breadth-first spanning tree.

    The search starts at ``root`` (default: the smallest vertex id) and visits
    neighbours through incident edges sorted by edge id.
    """
    if graph.n_vertices == 0:
        return []
    if root is None:
        root = min(graph.vertices)
    elif not graph.has_vertex(root):
        raise UnknownVertex(root)
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid in sorted(graph.incidence[v]):
            w = graph.edge_map[eid].other(v)
            if w not in seen:
                seen.add(w)
                tree.append(eid)
                queue.append(w)
    if len(seen) != graph.n_vertices:
        raise Disconnected("graph is not connected")
    return tree


def _climb_to_common(graph: Graph, parent, depth, a: str, b: str):
    """Tree edges climbed from ``a`` and from ``b`` up to their common ancestor."""
    up_a, up_b = [], []
    while depth[a] > depth[b]:
        up_a.append(parent[a])
        a = graph.edge_map[parent[a]].other(a)
    while depth[b] > depth[a]:
        up_b.append(parent[b])
        b = graph.edge_map[parent[b]].other(b)
    while a != b:
        up_a.append(parent[a])
        a = graph.edge_map[parent[a]].other(a)
        up_b.append(parent[b])
        b = graph.edge_map[parent[b]].other(b)
    return up_a, up_b


def fundamental_cycle_basis(graph: Graph, root: Optional[str] = None) -> List[EdgeChain]:
    """One cycle per non-tree edge, ordered as the edges appear in the graph.

    Each cycle carries +1 on its non-tree edge ``tail -> head`` and closes up
    through the tree path from ``head`` back to ``tail``.
    """
    tree = set(spanning_tree(graph, root))
    if root is None and graph.n_vertices:
        root = min(graph.vertices)
    parent: Dict[str, Optional[str]] = {root: None}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid in sorted(graph.incidence[v]):
            if eid not in tree:
                continue
            w = graph.edge_map[eid].other(v)
            if w not in depth:
                parent[w] = eid
                depth[w] = depth[v] + 1
                queue.append(w)

    basis = []
    for e in graph.edges:
        if e.id in tree:
            continue
        chain: EdgeChain = {e.id: 1}
        # walk head -> lca -> tail
        up_head, up_tail = _climb_to_common(graph, parent, depth, e.head, e.tail)
        pos = e.head
        for eid in up_head:
            step = graph.edge_map[eid]
            chain[eid] = chain.get(eid, 0) + (1 if step.tail == pos else -1)
            pos = step.other(pos)
        pos = e.tail
        for eid in up_tail:
            # traversed towards the tail, i.e. reversed relative to this walk
            step = graph.edge_map[eid]
            chain[eid] = chain.get(eid, 0) + (-1 if step.tail == pos else 1)
            pos = step.other(pos)
        basis.append({k: v for k, v in chain.items() if v})
    return basis


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def graph_from_dict(doc: Mapping) -> Graph:
    try:
        vertices = [str(v) for v in doc["vertices"]]
        edges = [Edge(str(e["id"]), str(e["tail"]), str(e["head"])) for e in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise MalformedGraph(f"bad graph document: {exc}") from None
    rotations = doc.get("rotations")
    outer = doc.get("outer_face")
    outer_face = None
    if outer is not None:
        try:
            outer_face = (str(outer["edge"]), str(outer.get("direction", "forward")))
        except (KeyError, TypeError, AttributeError):
            raise MalformedGraph("outer_face must be {'edge': id, 'direction': ...}") from None
    return Graph(tuple(vertices), tuple(edges), rotations, outer_face)


def graph_to_dict(graph: Graph) -> dict:
    doc = {
        "vertices": list(graph.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in graph.edges],
    }
    if graph.rotations is not None:
        doc["rotations"] = {v: list(cyc) for v, cyc in graph.rotations.items()}
    if graph.outer_face is not None:
        doc["outer_face"] = {"edge": graph.outer_face[0], "direction": graph.outer_face[1]}
    return doc


def read_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedGraph(f"{path}: {exc}") from None
    return graph_from_dict(doc)


def write_graph(graph: Graph, path) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(graph), indent=1) + "\n")


def make_graph(edges: Iterable[Tuple[str, str, str]], vertices: Iterable[str] = ()) -> Graph:
    """Convenience constructor from ``(id, tail, head)`` triples.

    Vertices are the given ones followed by any endpoint not yet listed.
    """
    vs = list(vertices)
    known = set(vs)
    es = []
    for eid, t, h in edges:
        for v in (t, h):
            if v not in known:
                known.add(v)
                vs.append(v)
        es.append(Edge(eid, t, h))
    return Graph(tuple(vs), tuple(es))
