"""Rational cup products on H^1 of the configuration space of a planar graph.

Degree-one classes pulled back from G x G are written as pairs
``(plus, minus)`` of functionals on H_1(G): the class is ``plus x 1 + 1 x minus``.
A functional is stored by its values on the bounded face cycles z_1..z_r;
its value on z_0 is the sum.  H^2 is written in the basis dual to the torus
classes indexed by the disjoint face pairs.

Two independent routes are provided.  ``basis_products`` fills the table from
the closed formulas, and ``verify_on_tori`` rebuilds every coefficient by
evaluating actual cochains of D(G, 2) on the two loops spanning each torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .discrete import DiscreteConfigComplex, build_discrete_config
from .errors import HypothesisViolated, NoEssentialVertex, NoOffBoundaryVertex, SolveFailure
from .intersection import IntersectionMatrix
from .linalg import solve_rational
from .planar import (
    DisjointPairSet,
    GeneratorCycles,
    PlanarStructure,
    check_thm3_hypotheses,
    choose_triple,
    circulate,
    h1_generator_cycles,
    torus_tensor,
)

Functional = Sequence[Fraction]


def _extend(values: Functional, i: int) -> Fraction:
    return Fraction(sum(values)) if i == 0 else Fraction(values[i - 1])


def cup_pullback(
    xi_plus: Functional,
    xi_minus: Functional,
    eta_plus: Functional,
    eta_minus: Functional,
    ps: PlanarStructure,
    pairs: DisjointPairSet,
) -> List[Fraction]:
    """Coefficients of ``xi cup eta`` over the torus-dual basis of H^2.

    For the pair (i, j) the coefficient is
    ``eta+(z_i) xi-(z_j) - xi+(z_i) eta-(z_j)``.
    """
    for f in (xi_plus, xi_minus, eta_plus, eta_minus):
        if len(f) != ps.r:
            raise ValueError(f"functionals need {ps.r} values, one per bounded face")
    return [
        _extend(eta_plus, i) * _extend(xi_minus, j) - _extend(xi_plus, i) * _extend(eta_minus, j)
        for i, j in pairs
    ]


def unit(r: int, i: int) -> List[Fraction]:
    return [Fraction(int(k == i - 1)) for k in range(r)]


def zero(r: int) -> List[Fraction]:
    return [Fraction(0)] * r


def edge_functionals(ps: PlanarStructure) -> List[Dict[str, Fraction]]:
    """Edge weights ``u_i`` with ``u_i(z_j) = [i == j]`` on the bounded faces."""
    edge_ids = [e.id for e in ps.graph.edges]
    col = {e: k for k, e in enumerate(edge_ids)}
    eqs = [{col[e]: c for e, c in z.items()} for z in ps.bounded_cycles]
    out = []
    for i in range(ps.r):
        rhs = [int(k == i) for k in range(ps.r)]
        x = solve_rational(eqs, rhs, len(edge_ids))
        out.append({e: x[k] for k, e in enumerate(edge_ids) if x[k]})
    return out


def _evaluate(cochain: np.ndarray, chain: np.ndarray) -> Fraction:
    return sum((cochain[k] * chain[k] for k in np.flatnonzero(chain)), Fraction(0))


@dataclass
class CohomologyBases:
    ps: PlanarStructure
    pairs: DisjointPairSet
    complex: DiscreteConfigComplex = field(repr=False)
    generators: GeneratorCycles = field(repr=False)
    functionals: List[Dict[str, Fraction]] = field(repr=False)

    @property
    def r(self) -> int:
        return self.ps.r

    @property
    def h2_basis(self) -> List[str]:
        return [f"eta{i},{j}" for i, j in self.pairs]

    @property
    def h1_basis(self) -> List[str]:
        r = self.r
        return [f"xi{i}" for i in range(1, r + 1)] + [f"eta{i}" for i in range(1, r + 1)] + ["special"]

    def pullback_pair(self, label: str) -> Optional[Tuple[List[Fraction], List[Fraction]]]:
        """``(plus, minus)`` functionals of a pulled-back basis class; None for special."""
        r = self.r
        if label.startswith("xi"):
            return unit(r, int(label[2:])), zero(r)
        if label.startswith("eta"):
            return zero(r), unit(r, int(label[3:]))
        return None

    def cochain(self, label: str) -> np.ndarray:
        """A cocycle of D(G, 2) representing the class, over ``complex.cells1``."""
        if label == "special":
            return self.special_cochain
        first = label.startswith("xi")
        u = self.functionals[int(label[2:] if first else label[3:]) - 1]
        vec = np.array([Fraction(0)] * len(self.complex.cells1), dtype=object)
        for k, cell in enumerate(self.complex.cells1):
            if first and cell[0] == "ev":
                vec[k] = u.get(cell[1], Fraction(0))
            elif not first and cell[0] == "ve":
                vec[k] = u.get(cell[2], Fraction(0))
        return vec

    def parked_loops(self, include_outer: bool = True):
        """``(face, vertex, first, chain)`` for every loop of one particle round a
        face boundary while the other waits at a vertex off that boundary."""
        graph, D = self.ps.graph, self.complex
        faces = range(0 if include_outer else 1, self.r + 1)
        for i in faces:
            z = self.ps.face_cycles[i]
            touched = {v for e in z for v in graph.edge_map[e].endpoints()}
            for v in sorted(set(graph.vertices) - touched):
                for first in (True, False):
                    yield i, v, first, circulate(D, z, v, first)

    @cached_property
    def special_cochain(self) -> np.ndarray:
        """Cocycle for the special class, normalized to +1 on the triple cycle.

        When the Betti formula hypotheses hold this is the dual-basis vector
        of the triple cycle against the generator cycles.  Otherwise the
        generators do not span H_1, and the class is pinned down by vanishing
        on every parked loop (outer face included) instead; if no such class
        exists :class:`HypothesisViolated` is raised.
        """
        D = self.complex
        eqs: List[Dict[int, int]] = []
        rhs: List[int] = []
        for j in range(D.boundary2.shape[1]):
            col = D.boundary2[:, j]
            eqs.append({int(k): int(col[k]) for k in np.flatnonzero(col)})
            rhs.append(0)
        if check_thm3_hypotheses(self.ps, self.ps.graph).all_pass:
            loops = list(self.generators.cycles)
        else:
            loops = [c for _, _, _, c in self.parked_loops()] + [self.generators.cycles[-1]]
        targets = [0] * (len(loops) - 1) + [1]
        for c, t in zip(loops, targets):
            eqs.append({int(k): int(c[k]) for k in np.flatnonzero(c)})
            rhs.append(t)
        try:
            x = solve_rational(eqs, rhs, len(D.cells1))
        except SolveFailure as exc:
            raise HypothesisViolated("no cocycle vanishes on all parked loops and not on the triple cycle") from exc
        return np.array(x, dtype=object)

    def special_defects(self) -> List[Tuple[int, str, str, Fraction]]:
        """Parked loops on which the special cocycle does not vanish.

        Each item is ``(face, vertex, "cv" | "vc", value)``.  Loops round the
        outer face with the parked vertex inside it pick up the winding of one
        particle about the other.
        """
        phi = self.special_cochain
        out = []
        for i, v, first, chain in self.parked_loops():
            val = _evaluate(phi, chain)
            if val:
                out.append((i, v, "cv" if first else "vc", val))
        return out

    @cached_property
    def pairing_data(self) -> np.ndarray:
        """Values of each H^1 basis class (rows) on each generator cycle (columns)."""
        rows = [self.cochain(lab) for lab in self.h1_basis]
        return np.array(
            [[sum((a * b for a, b in zip(row, cyc)), Fraction(0)) for cyc in self.generators.cycles] for row in rows],
            dtype=object,
        )


def cohomology_bases(ps: PlanarStructure, pairs: DisjointPairSet, complex: DiscreteConfigComplex = None) -> CohomologyBases:
    graph = ps.graph
    try:
        choose_triple(graph)
    except NoEssentialVertex as exc:
        raise HypothesisViolated("cup products need an essential vertex") from exc
    if complex is None:
        complex = build_discrete_config(graph)
    try:
        gens = h1_generator_cycles(ps, graph, complex)
    except NoOffBoundaryVertex as exc:
        raise HypothesisViolated(f"cup products need a vertex off every face boundary: {exc}") from exc
    return CohomologyBases(ps, pairs, complex, gens, edge_functionals(ps))


@dataclass
class ProductTable:
    entries: Dict[Tuple[str, str], List[Fraction]]
    bases: CohomologyBases = field(repr=False)

    def __getitem__(self, key: Tuple[str, str]) -> List[Fraction]:
        return self.entries[key]

    def nonzero(self) -> Dict[Tuple[str, str], Dict[str, Fraction]]:
        names = self.bases.h2_basis
        return {
            k: {names[n]: c for n, c in enumerate(v) if c}
            for k, v in self.entries.items()
            if any(v)
        }

    def as_dict(self) -> dict:
        return {
            "h1_basis": self.bases.h1_basis,
            "h2_basis": self.bases.h2_basis,
            "products": {
                f"{a}*{b}": {n: str(c) for n, c in terms.items()}
                for (a, b), terms in sorted(self.nonzero().items())
            },
        }


def epsilon(pairs: DisjointPairSet, i: int, j: int) -> int:
    return int((i, j) in pairs)


def basis_products(ps: PlanarStructure, pairs: DisjointPairSet, bases: CohomologyBases = None) -> ProductTable:
    """Product table on the basis xi_1..xi_r, eta_1..eta_r, special.

    ``xi_i xi_j`` and ``eta_i eta_j`` vanish, every product with special
    vanishes, and ``xi_i eta_j = -e_ij eta_ij - e_i0 eta_i0 - e_0j eta_0j``
    where ``e_ab`` is 1 exactly when faces a and b have disjoint closures.
    """
    if bases is None:
        bases = cohomology_bases(ps, pairs)
    index = {p: k for k, p in enumerate(pairs)}
    n = len(pairs)
    labels = bases.h1_basis
    entries: Dict[Tuple[str, str], List[Fraction]] = {
        (a, b): [Fraction(0)] * n for a in labels for b in labels
    }
    for i in range(1, ps.r + 1):
        for j in range(1, ps.r + 1):
            vec = [Fraction(0)] * n
            for pair in ((i, j), (i, 0), (0, j)):
                if pair in index:
                    vec[index[pair]] -= 1
            entries[(f"xi{i}", f"eta{j}")] = vec
            entries[(f"eta{j}", f"xi{i}")] = [-c for c in vec]
    return ProductTable(entries, bases)


def product_via_pullback(table: ProductTable, a: str, b: str) -> Optional[List[Fraction]]:
    """The product of two pulled-back basis classes through the general formula."""
    pa = table.bases.pullback_pair(a)
    pb = table.bases.pullback_pair(b)
    if pa is None or pb is None:
        return None
    return cup_pullback(pa[0], pa[1], pb[0], pb[1], table.bases.ps, table.bases.pairs)


Mismatch = Tuple[str, str, Tuple[int, int], Fraction, Fraction]


@dataclass
class ToriCheck:
    tensors_in_kernel: bool
    mismatches: List[Mismatch]
    """``(x, y, pair, table value, torus value)`` for each disagreement."""

    @property
    def pullback_mismatches(self) -> List[Mismatch]:
        return [m for m in self.mismatches if "special" not in m[:2]]

    @property
    def special_mismatches(self) -> List[Mismatch]:
        return [m for m in self.mismatches if "special" in m[:2]]

    @property
    def ok(self) -> bool:
        return self.tensors_in_kernel and not self.mismatches


def tori_report(table: ProductTable, im: IntersectionMatrix, include_special: bool = True) -> ToriCheck:
    """Compare every table entry with its value on the matching torus.

    With ``include_special=False`` only the pulled-back classes are checked,
    which avoids solving for the special cocycle.
    """
    bases = table.bases
    ps, D = bases.ps, bases.complex
    in_kernel = all(
        not any(im.apply(torus_tensor(i, j, ps.r))) for i, j in bases.pairs
    ) if ps.r else True
    labels = [lab for lab in bases.h1_basis if include_special or lab != "special"]
    cochains = {lab: bases.cochain(lab) for lab in labels}
    mismatches = []
    for k, (i, j) in enumerate(bases.pairs):
        park_j = min(ps.face_vertices[j])
        park_i = min(ps.face_vertices[i])
        # particle 1 runs round face i while particle 2 waits on face j, and vice versa
        loop_a = circulate(D, ps.face_cycles[i], park_j, True)
        loop_b = circulate(D, ps.face_cycles[j], park_i, False)
        va = {lab: _evaluate(c, loop_a) for lab, c in cochains.items()}
        vb = {lab: _evaluate(c, loop_b) for lab, c in cochains.items()}
        for x in labels:
            for y in labels:
                expected = vb[x] * va[y] - va[x] * vb[y]
                got = table.entries[(x, y)][k]
                if got != expected:
                    mismatches.append((x, y, (i, j), got, expected))
    return ToriCheck(in_kernel, mismatches)


def verify_on_tori(table: ProductTable, im: IntersectionMatrix) -> bool:
    """Every table coefficient equals the evaluation on the matching torus."""
    return tori_report(table, im).ok


__all__ = [
    "CohomologyBases",
    "ProductTable",
    "ToriCheck",
    "basis_products",
    "cohomology_bases",
    "cup_pullback",
    "edge_functionals",
    "epsilon",
    "product_via_pullback",
    "tori_report",
    "verify_on_tori",
]
