"""The intersection form H_1(G) (x) H_1(G) -> H_2(N, dN) and what it yields.

``I(z (x) z')`` is the 2-chain of the relative complex whose coefficient on
``(e, f)`` is ``z[e] * z'[f]`` whenever ``e`` and ``f`` meet.  Its kernel is
H_2 of the configuration space, and its cokernel together with two copies of
H_1(G) gives H_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence

import numpy as np

from .errors import HypothesisViolated, NonAdjacentEdges, NotACycle
from .graph import EdgeChain, Graph, is_cycle, validate
from .linalg import (
    HomologySummary,
    cokernel_invariants,
    kernel_coordinates,
    kernel_matrix,
    matmul_exact,
    zeros,
)
from .relative import RelativeComplex, RelativeH2, relative_h2


def _require_cycle(graph: Graph, z: Mapping[str, int]):
    if not is_cycle(graph, z):
        raise NotACycle(f"chain {dict(z)!r} has nonzero boundary")


def intersection_tensor(z: Mapping[str, int], z2: Mapping[str, int], complex: RelativeComplex) -> np.ndarray:
    """I(z (x) z2) as a vector over ``complex.cells2``."""
    _require_cycle(complex.graph, z)
    _require_cycle(complex.graph, z2)
    out = np.zeros(len(complex.cells2), dtype=object)
    for k, (e, f) in enumerate(complex.cells2):
        out[k] = z.get(e, 0) * z2.get(f, 0)
    return out


def scalar_form(graph: Graph, e: str, f: str, z: Mapping[str, int], z2: Mapping[str, int]) -> int:
    """Coefficient of the cell ``(e, f)`` in I(z (x) z2)."""
    ea, fb = graph.edge(e), graph.edge(f)
    if not set(ea.endpoints()) & set(fb.endpoints()):
        raise NonAdjacentEdges(f"edges {e!r} and {f!r} do not meet")
    _require_cycle(graph, z)
    _require_cycle(graph, z2)
    return z.get(e, 0) * z2.get(f, 0)


def cycle_matrix(basis: Sequence[Mapping[str, int]], edge_ids: Sequence[str]) -> np.ndarray:
    """Edges x basis matrix of chain coefficients (rows in ``edge_ids`` order)."""
    Z = zeros(len(edge_ids), len(basis))
    for j, z in enumerate(basis):
        for i, eid in enumerate(edge_ids):
            Z[i, j] = z.get(eid, 0)
    return Z


@dataclass
class IntersectionMatrix:
    basis: List[EdgeChain]
    matrix: np.ndarray
    """cells2 x r^2; column ``i * r + j`` is I(z_i (x) z_j)."""
    h2_coordinates: np.ndarray
    """The same map written in the kernel basis of H_2(N, dN)."""
    h2: RelativeH2
    complex: RelativeComplex = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.basis)

    def column(self, i: int, j: int) -> np.ndarray:
        return self.matrix[:, i * self.r + j]

    def apply(self, tensor) -> np.ndarray:
        """I applied to an r x r coefficient tensor, as a cells2 vector."""
        vec = np.asarray(tensor, dtype=object).reshape(-1, 1)
        return matmul_exact(self.matrix, vec)[:, 0]


def build_intersection_matrix(
    graph: Graph,
    basis: Sequence[Mapping[str, int]],
    complex: RelativeComplex,
    h2: Optional[RelativeH2] = None,
) -> IntersectionMatrix:
    for z in basis:
        _require_cycle(graph, z)
    if h2 is None:
        h2 = relative_h2(complex)
    r = len(basis)
    M = zeros(len(complex.cells2), r * r)
    for k, (e, f) in enumerate(complex.cells2):
        left = [z.get(e, 0) for z in basis]
        right = [z.get(f, 0) for z in basis]
        if any(left) and any(right):
            M[k, :] = np.array(np.outer(left, right).ravel(), dtype=object)
    coords = kernel_coordinates(h2.snf, M) if r else zeros(h2.rank, 0)
    return IntersectionMatrix([dict(z) for z in basis], M, coords, h2, complex)


@dataclass
class ConfigHomologyReport:
    b2: int
    h2_generators: List[np.ndarray]
    b1: int
    coker_free_rank: int
    coker_torsion: List[int]
    b1_decomposition: tuple
    oracle_agreement: Optional[bool] = None

    def as_dict(self) -> dict:
        return {
            "b1": self.b1,
            "b2": self.b2,
            "coker_free_rank": self.coker_free_rank,
            "coker_torsion": list(self.coker_torsion),
            "b1_decomposition": list(self.b1_decomposition),
            "h2_generators": [[[int(x) for x in row] for row in g] for g in self.h2_generators],
            "oracle_agreement": self.oracle_agreement,
        }


def _normalize_sign(v: np.ndarray) -> np.ndarray:
    for x in v:
        if x != 0:
            return v if x > 0 else -v
    return v


def config_homology(
    graph: Graph, im: IntersectionMatrix, oracle: Optional[HomologySummary] = None
) -> ConfigHomologyReport:
    """b_1, b_2 and H_2 generators of F(G, 2) from the intersection form.

    The cokernel is taken inside the H_2(N, dN) lattice.  Generators are the
    kernel basis vectors reshaped to r x r, each signed so that its first
    nonzero entry (row-major) is positive.
    """
    cls = validate(graph)
    if not cls.connected or cls.circle_like or cls.interval_like:
        raise HypothesisViolated(
            "needs a connected graph homeomorphic to neither a circle nor an interval"
        )
    r = im.r
    coords = im.h2_coordinates
    if r:
        K, _ = kernel_matrix(coords)
    else:
        K = zeros(0, 0)
    gens = [_normalize_sign(K[:, k].copy()).reshape(r, r) for k in range(K.shape[1])]
    free, torsion = cokernel_invariants(coords) if coords.size else (im.h2.rank, [])
    b2 = len(gens)
    b1 = free + 2 * cls.first_betti
    report = ConfigHomologyReport(
        b2=b2,
        h2_generators=gens,
        b1=b1,
        coker_free_rank=free,
        coker_torsion=torsion,
        b1_decomposition=(free, 2 * cls.first_betti),
    )
    if oracle is not None:
        report.oracle_agreement = (
            oracle.betti[1] == b1
            and oracle.betti[2] == b2
            and sorted(oracle.torsion[1]) == sorted(torsion)
            and not oracle.torsion[2]
        )
    return report


def expand_tensor(basis: Sequence[Mapping[str, int]], tensor, edge_ids: Sequence[str]) -> np.ndarray:
    """Edge-level matrix sum_ij t_ij z_i[e] z_j[f] of a basis tensor."""
    Z = cycle_matrix(basis, edge_ids) if basis else zeros(len(edge_ids), 0)
    T = np.asarray(tensor, dtype=object).reshape(len(basis), len(basis))
    return matmul_exact(matmul_exact(Z, T), Z.T.copy())
