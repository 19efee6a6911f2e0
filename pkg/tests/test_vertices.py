from fractions import Fraction
from itertools import product

import pytest

from polydiam.generators import gen_cross_polytope, gen_cube, gen_klee_minty, gen_polygon, gen_random_tangent, gen_simplex
from polydiam.hrep import HPolyhedron
from polydiam.linalg import rank
from polydiam.vertices import (
    EmptyPolyhedronError,
    NotPointedError,
    double_description,
    enumerate_vertices,
    is_bounded,
    redundant_rows,
)


def coords(vertices):
    return sorted(v.coords for v in vertices)


def known_cube(d):
    return sorted(tuple(Fraction(b) for b in bits) for bits in product((0, 1), repeat=d))


def known_simplex(d):
    pts = [tuple(Fraction(0) for _ in range(d))]
    pts += [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    return sorted(pts)


def known_cross(d):
    pts = []
    for i in range(d):
        for s in (1, -1):
            pts.append(tuple(Fraction(s * int(i == j)) for j in range(d)))
    return sorted(pts)


def test_unit_square(unit_square):
    vertices, inc = enumerate_vertices(unit_square)
    assert len(vertices) == 4
    assert all(len(v.active_set) == 2 for v in vertices)
    assert inc.shape == (4, 4)


def test_cube3_brute_force():
    vertices, _ = enumerate_vertices(gen_cube(3), method="brute")
    assert coords(vertices) == known_cube(3)
    assert all(len(v.active_set) == 3 for v in vertices)


def test_square_pyramid_apex_is_not_simple(square_pyramid):
    vertices, _ = enumerate_vertices(square_pyramid)
    assert len(vertices) == 5
    apex = next(v for v in vertices if v.coords == (0, 0, 1))
    assert apex.active_set == frozenset({1, 2, 3, 4})


@pytest.mark.parametrize("method", ["dd", "brute"])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_known_vertex_sets(method, d):
    assert coords(enumerate_vertices(gen_cube(d), method=method)[0]) == known_cube(d)
    assert coords(enumerate_vertices(gen_simplex(d), method=method)[0]) == known_simplex(d)
    if d >= 2:
        assert coords(enumerate_vertices(gen_cross_polytope(d), method=method)[0]) == known_cross(d)


@pytest.mark.parametrize(
    "P",
    [gen_polygon(9), gen_klee_minty(3), gen_random_tangent(3, 9, 1), gen_random_tangent(4, 9, 1),
     HPolyhedron.from_rows([[-1, 0], [0, -1], [1, -1]], [0, 0, 2])],
    ids=["9-gon", "klee-minty", "tangent3", "tangent4", "unbounded"],
)
def test_double_description_agrees_with_brute_force(P):
    assert enumerate_vertices(P, method="dd") == enumerate_vertices(P, method="brute")


def test_vertex_invariants():
    P = gen_random_tangent(4, 10, 2)
    vertices, inc = enumerate_vertices(P)
    for v in vertices:
        assert P.contains(v.coords)
        assert rank([P.normals[f] for f in v.active_set]) == P.dim
        assert inc.active(v.id) == v.active_set
        assert len(v.active_set) >= P.dim
    assert coords(vertices) == [v.coords for v in vertices]


def test_parallel_brute_force_is_identical():
    P = gen_cross_polytope(4)
    serial = enumerate_vertices(P, method="brute", n_jobs=1)
    parallel = enumerate_vertices(P, method="brute", n_jobs=3)
    assert serial == parallel


def test_not_pointed_and_empty_are_distinct():
    strip = HPolyhedron.from_rows([[1, 0], [-1, 0]], [1, 0])
    with pytest.raises(NotPointedError):
        enumerate_vertices(strip)
    empty = HPolyhedron.from_rows([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, -1, 1, 0])
    with pytest.raises(EmptyPolyhedronError):
        enumerate_vertices(empty)
    with pytest.raises(EmptyPolyhedronError):
        enumerate_vertices(empty, method="brute")


def test_unbounded_polyhedron_vertices_and_rays():
    # x >= 0, y >= 0, x + y >= 1: two vertices, two rays
    P = HPolyhedron.from_rows([[-1, 0], [0, -1], [-1, -1]], [0, 0, -1])
    vertices, _ = enumerate_vertices(P)
    assert coords(vertices) == [(0, 1), (1, 0)]
    _, rays = double_description(P)
    assert rays == [(0, 1), (1, 0)]
    assert not is_bounded(P)
    assert is_bounded(gen_cube(3))


def test_redundant_rows():
    P = HPolyhedron.from_rows([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 0]][:4] + [[2, 0]], [1, 0, 1, 0, 10])
    vertices, _ = enumerate_vertices(P)
    assert redundant_rows(P, vertices) == {4}
    cube = gen_cube(3)
    assert redundant_rows(cube, enumerate_vertices(cube)[0]) == frozenset()
