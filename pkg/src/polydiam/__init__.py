"""Exact polyhedron graphs, diameters and recursive diameter-bound certificates."""

__version__ = "0.1.0"

from .bounds import BoundTable, comparison_bounds, kk_recurrence, quasipoly_bound, verify_theorem_grid
from .generators import (
    gen_cross_polytope,
    gen_cube,
    gen_klee_minty,
    gen_polygon,
    gen_product,
    gen_random_tangent,
    gen_simplex,
)
from .graph import PolytopeGraph, analyze, bfs_distances, build_graph, diameter
from .hrep import HPolyhedron, facet_subpolyhedron, parse_hrep, serialize_hrep
from .kkpath import kk_path, verify_q_lemma
from .vertices import enumerate_vertices, redundant_rows
