import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confspace import corpus
from confspace.discrete import build_discrete_config, homology_oracle
from confspace.errors import HypothesisViolated, NonAdjacentEdges, NotACycle
from confspace.graph import fundamental_cycle_basis, make_graph, subdivide, validate
from confspace.intersection import (
    build_intersection_matrix,
    config_homology,
    expand_tensor,
    intersection_tensor,
    scalar_form,
)
from confspace.relative import build_relative_complex

from helpers import bowtie, random_graph, triangle


def k5_setup():
    g = corpus.complete_k5()
    basis = fundamental_cycle_basis(g, root="5")
    return g, basis, build_relative_complex(g)


def as_terms(N, vec):
    return {N.cells2[k]: int(vec[k]) for k in range(len(vec)) if vec[k]}


def test_k5_displayed_intersections():
    g, basis, N = k5_setup()
    C = dict(zip(["12", "13", "14", "23", "24", "34"], basis))
    assert as_terms(N, intersection_tensor(C["12"], C["34"], N)) == {
        ("25", "45"): 1, ("25", "35"): -1, ("15", "45"): -1, ("15", "35"): 1,
    }
    assert as_terms(N, intersection_tensor(C["13"], C["24"], N)) == {
        ("35", "45"): 1, ("35", "25"): -1, ("15", "45"): -1, ("15", "25"): 1,
    }
    assert as_terms(N, intersection_tensor(C["14"], C["23"], N)) == {
        ("45", "35"): 1, ("15", "35"): -1, ("45", "25"): -1, ("15", "25"): 1,
    }


def test_k5_generator_is_the_antisymmetric_tensor():
    g, basis, N = k5_setup()
    im = build_intersection_matrix(g, basis, N)
    rep = config_homology(g, im, homology_oracle(build_discrete_config(g)))
    assert (rep.b1, rep.b2, rep.coker_free_rank, rep.coker_torsion) == (12, 1, 0, [])
    assert rep.oracle_agreement
    x = np.zeros((6, 6), dtype=object)
    for i, j, s in [(0, 5, 1), (1, 4, -1), (2, 3, 1), (5, 0, 1), (4, 1, -1), (3, 2, 1)]:
        x[i, j] = s
    assert (rep.h2_generators[0] == x).all()
    assert not any(im.apply(x))


def test_k33_homology_via_form():
    g = corpus.complete_k33()
    im = build_intersection_matrix(g, fundamental_cycle_basis(g), build_relative_complex(g))
    rep = config_homology(g, im, homology_oracle(build_discrete_config(g)))
    assert (rep.b1, rep.b2, rep.coker_torsion) == (8, 1, [])
    assert rep.oracle_agreement
    assert im.h2.rank == 15


def test_scalar_form_errors():
    g = corpus.complete_k5()
    z = fundamental_cycle_basis(g)[0]
    with pytest.raises(NonAdjacentEdges):
        scalar_form(g, "12", "34", z, z)
    with pytest.raises(NotACycle):
        scalar_form(g, "12", "13", {"12": 1}, z)


def test_config_homology_rejects_excluded_graphs():
    for g in (triangle(), make_graph([("e", "a", "b")])):
        N = build_relative_complex(g)
        im = build_intersection_matrix(g, fundamental_cycle_basis(g), N)
        with pytest.raises(HypothesisViolated):
            config_homology(g, im)


def test_edge_disjoint_but_touching_cycles_do_intersect():
    g = bowtie()
    N = build_relative_complex(g)
    left = {"oa": 1, "ab": 1, "bo": 1}
    right = {"oc": 1, "cd": 1, "do": 1}
    assert any(intersection_tensor(left, right, N))


def test_expand_tensor_matches_direct_sum():
    g, basis, N = k5_setup()
    eids = [e.id for e in g.edges]
    t = np.zeros((6, 6), dtype=object)
    t[0, 5] = 2
    X = expand_tensor(basis, t, eids)
    for a, e in enumerate(eids):
        for b, f in enumerate(eids):
            assert X[a, b] == 2 * basis[0].get(e, 0) * basis[5].get(f, 0)


def _qualifying(seed):
    g = random_graph(random.Random(seed), max_vertices=8, max_edges=12)
    return g if validate(g).qualifies() else None


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_scalar_form_symmetry(seed):
    g = random_graph(random.Random(seed))
    basis = fundamental_cycle_basis(g) if validate(g).connected else []
    for z, w in itertools.product(basis[:3], repeat=2):
        for e in g.edges:
            for f in g.edges:
                if set(e.endpoints()) & set(f.endpoints()):
                    assert scalar_form(g, e.id, f.id, z, w) == scalar_form(g, f.id, e.id, w, z)


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_vertex_disjoint_cycles_do_not_intersect(seed):
    g = random_graph(random.Random(seed))
    if not validate(g).connected:
        return
    N = build_relative_complex(g)
    basis = fundamental_cycle_basis(g)
    for z, w in itertools.combinations(basis, 2):
        vz = {v for e in z for v in g.edge(e).endpoints()}
        vw = {v for e in w for v in g.edge(e).endpoints()}
        if not vz & vw:
            assert not any(intersection_tensor(z, w, N))


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_oracle_and_form_agree(seed):
    g = _qualifying(seed)
    if g is None:
        return
    im = build_intersection_matrix(g, fundamental_cycle_basis(g), build_relative_complex(g))
    oracle = homology_oracle(build_discrete_config(g))
    rep = config_homology(g, im, oracle)
    assert rep.oracle_agreement, (rep.as_dict(), oracle)
    for x in rep.h2_generators:
        assert not any(im.apply(x))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.integers(min_value=2, max_value=3))
def test_subdivision_invariance(seed, k):
    g = random_graph(random.Random(seed), max_vertices=6, max_edges=8)
    if not validate(g).qualifies():
        return

    def ranks(h):
        N = build_relative_complex(h)
        im = build_intersection_matrix(h, fundamental_cycle_basis(h), N)
        rep = config_homology(h, im, homology_oracle(build_discrete_config(h)))
        return (im.h2.rank, rep.b1, rep.b2, rep.coker_free_rank, rep.coker_torsion, rep.oracle_agreement)

    assert ranks(g) == ranks(subdivide(g, k))
