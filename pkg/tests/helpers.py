"""Shared generators and an independent rank oracle for the test suite."""

import random
from fractions import Fraction

import numpy as np
from scipy.spatial import Delaunay

from confspace.graph import Graph, components, make_graph
from confspace.planar import embed_with_coordinates


def fraction_rank(matrix) -> int:
    """Rank over Q by sparse Gaussian elimination on Fractions.

    Deliberately shares nothing with the package's Smith normal form code.
    """
    a = np.asarray(matrix, dtype=object)
    if a.size == 0:
        return 0
    rows = []
    for i in range(a.shape[0]):
        nz = {j: Fraction(int(a[i, j])) for j in np.flatnonzero(a[i])}
        if nz:
            rows.append(nz)
    pivots = {}
    for row in rows:
        while row:
            lead = min(row)
            if lead not in pivots:
                pivots[lead] = row
                break
            prow = pivots[lead]
            f = row[lead] / prow[lead]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


def rational_betti(counts, d1, d2):
    r1 = fraction_rank(d1) if d1.size else 0
    r2 = fraction_rank(d2) if d2.size else 0
    return [counts[0] - r1, counts[1] - r1 - r2, counts[2] - r2]


def random_graph(rng: random.Random, max_vertices=8, max_edges=12, connected=True) -> Graph:
    n = rng.randint(2, max_vertices)
    verts = [f"v{k}" for k in range(n)]
    pairs = set()
    if connected:
        order = verts[:]
        rng.shuffle(order)
        for k in range(1, n):
            pairs.add(frozenset((order[k], order[rng.randrange(k)])))
    all_pairs = [frozenset((a, b)) for i, a in enumerate(verts) for b in verts[i + 1:]]
    rng.shuffle(all_pairs)
    target = rng.randint(len(pairs), min(max_edges, len(all_pairs)))
    for p in all_pairs:
        if len(pairs) >= target:
            break
        pairs.add(p)
    edges = []
    for k, p in enumerate(sorted(pairs, key=sorted)):
        a, b = sorted(p)
        if rng.random() < 0.5:
            a, b = b, a
        edges.append((f"e{k}", a, b))
    return make_graph(edges, verts)


def random_planar(rng: random.Random, min_points=4, max_points=8, drop=0.35) -> Graph:
    """A connected straight-line planar graph: a Delaunay triangulation with
    some edges removed, embedded from its drawing."""
    n = rng.randint(min_points, max_points)
    pts = np.array([[rng.random(), rng.random()] for _ in range(n)])
    tri = Delaunay(pts)
    pairs = set()
    for simplex in tri.simplices:
        for i in range(3):
            a, b = sorted((int(simplex[i]), int(simplex[(i + 1) % 3])))
            pairs.add((a, b))
    pairs = sorted(pairs)
    rng.shuffle(pairs)
    keep = list(pairs)
    for p in pairs:
        if rng.random() < drop:
            trial = [q for q in keep if q != p]
            g = make_graph([(f"e{k}", f"p{a}", f"p{b}") for k, (a, b) in enumerate(trial)],
                           [f"p{k}" for k in range(n)])
            if len(components(g)) == 1:
                keep = trial
    keep.sort()
    edges = []
    for k, (a, b) in enumerate(keep):
        if rng.random() < 0.5:
            a, b = b, a
        edges.append((f"e{k}", f"p{a}", f"p{b}"))
    g = make_graph(edges, [f"p{k}" for k in range(n)])
    coords = {f"p{k}": (float(pts[k, 0]), float(pts[k, 1])) for k in range(n)}
    return embed_with_coordinates(g, coords)


def triangle() -> Graph:
    return make_graph([("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")])


def bowtie() -> Graph:
    """Two triangles sharing the vertex o."""
    return make_graph([("oa", "o", "a"), ("ab", "a", "b"), ("bo", "b", "o"),
                       ("oc", "o", "c"), ("cd", "c", "d"), ("do", "d", "o")])
