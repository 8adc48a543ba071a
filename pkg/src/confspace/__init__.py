"""Homology and cohomology of the configuration space of two points on a graph."""

from .cup import basis_products, cohomology_bases, cup_pullback, verify_on_tori
from .discrete import (
    build_discrete_config,
    euler_characteristic_formula,
    homology_oracle,
    inclusion_h1_rank,
)
from .errors import *  # noqa: F401,F403
from .graph import (
    Edge,
    Graph,
    GraphClassification,
    fundamental_cycle_basis,
    make_graph,
    read_graph,
    subdivide,
    validate,
    valence,
    write_graph,
)
from .intersection import build_intersection_matrix, config_homology, intersection_tensor, scalar_form
from .linalg import cokernel_invariants, kernel_basis, rank, smith_normal_form
from .planar import (
    betti_via_thm3,
    check_thm3_hypotheses,
    disjoint_pairs,
    h1_generator_cycles,
    torus_basis_check,
    trace_faces,
)
from .relative import build_relative_complex, rank_formula_check, relative_h2

__version__ = "0.1.0"
