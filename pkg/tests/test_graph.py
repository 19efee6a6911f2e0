from itertools import combinations

import pytest

from polydiam.bounds import quasipoly_bound
from polydiam.generators import gen_cross_polytope, gen_cube, gen_klee_minty, gen_polygon, gen_product, gen_random_tangent, gen_simplex
from polydiam.graph import analyze, bfs_distances, build_graph, diameter, shortest_path
from polydiam.hrep import HPolyhedron, facet_subpolyhedron
from polydiam.vertices import enumerate_vertices


def graph_of(P):
    vertices, inc = enumerate_vertices(P)
    return build_graph(vertices, inc, P)


def cycle_oracle(n, s):
    """Distances on an n-cycle, from an explicit walk in both directions."""
    return [min((w - s) % n, (s - w) % n) for w in range(n)]


def test_square_is_four_cycle(unit_square):
    G = graph_of(unit_square)
    assert G.n_edges == 4
    assert all(len(a) == 2 for a in G.adjacency)


def test_cube3_edges_are_hamming_neighbours():
    an = analyze(gen_cube(3))
    expected = {
        (a.id, b.id)
        for a, b in combinations(an.vertices, 2)
        if sum(x != y for x, y in zip(a.coords, b.coords)) == 1
    }
    assert set(an.graph.edges()) == expected
    assert an.graph.n_edges == 12
    assert all(len(nb) == 3 for nb in an.graph.adjacency)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_simplex_graph_is_complete(d):
    G = graph_of(gen_simplex(d))
    assert G.n_edges == (d + 1) * d // 2


def test_pyramid_edges(square_pyramid):
    an = analyze(square_pyramid)
    assert an.graph.n_edges == 8
    apex = an.index[(0, 0, 1)]
    assert len(an.graph.adjacency[apex]) == 4


def test_random_simple_polytope_edges_share_d_minus_1_facets():
    # for a simple polytope, edges are exactly the pairs sharing d-1 facets
    an = analyze(gen_random_tangent(4, 10, 6))
    d = 4
    expected = {
        (a.id, b.id) for a, b in combinations(an.vertices, 2) if len(a.active_set & b.active_set) == d - 1
    }
    assert set(an.graph.edges()) == expected


def test_bfs_cube_corner_layers():
    G = graph_of(gen_cube(3))
    dist = bfs_distances(G, 0)
    assert [dist.count(k) for k in range(4)] == [1, 3, 3, 1]


def test_bfs_complete_graph():
    assert max(bfs_distances(graph_of(gen_simplex(4)), 2)) == 1


def test_bfs_single_vertex_cone(quadrant_cone):
    G = graph_of(quadrant_cone)
    assert bfs_distances(G, 0) == [0]
    assert diameter(G).diameter == 0


def test_bfs_polygon_matches_cycle_oracle():
    an = analyze(gen_polygon(11))
    # polygon vertices are sorted by coordinates, so recover cyclic order from the graph
    order = [0]
    while len(order) < 11:
        nxt = [w for w in an.graph.adjacency[order[-1]] if w not in order]
        order.append(nxt[0])
    pos = {w: i for i, w in enumerate(order)}
    dist = bfs_distances(an.graph, order[3])
    oracle = cycle_oracle(11, 3)
    assert [dist[w] for w in order] == oracle


def test_shortest_path_prefers_smallest_neighbour():
    G = graph_of(gen_cube(3))
    path = shortest_path(G, 0, 7)
    assert len(path) == 4
    assert path == [0, 1, 3, 7]


@pytest.mark.parametrize("d", [3, 4])
def test_cube_diameter(d):
    assert diameter(graph_of(gen_cube(d))).diameter == d


@pytest.mark.parametrize("n", [5, 8, 9])
def test_polygon_diameter(n):
    assert diameter(graph_of(gen_polygon(n))).diameter == n // 2


@pytest.mark.parametrize("p, q", [(4, 5), (5, 7)])
def test_product_diameter_and_product_graph(p, q):
    P, Q = gen_polygon(p), gen_polygon(q)
    an = analyze(gen_product(P, Q))
    aP, aQ = analyze(P), analyze(Q)
    # oracle: Cartesian product of the two cycle graphs
    expected = set()
    pts = {v.coords: v.id for v in an.vertices}
    for a in aP.vertices:
        for b in aQ.vertices:
            for w in aP.graph.adjacency[a.id]:
                expected.add(frozenset((pts[a.coords + b.coords], pts[aP.vertices[w].coords + b.coords])))
            for w in aQ.graph.adjacency[b.id]:
                expected.add(frozenset((pts[a.coords + b.coords], pts[a.coords + aQ.vertices[w].coords])))
    assert {frozenset(e) for e in an.graph.edges()} == expected
    assert diameter(an.graph).diameter == p // 2 + q // 2


def test_klee_minty_graph_isomorphic_to_cube():
    km = analyze(gen_klee_minty(3))
    # every Klee-Minty vertex picks one of each pair {lower_i, upper_i}
    label = {v.id: tuple(int(2 * i + 1 in v.active_set) for i in range(3)) for v in km.vertices}
    assert sorted(label.values()) == sorted(set(label.values()))
    for u, w in km.graph.edges():
        assert sum(a != b for a, b in zip(label[u], label[w])) == 1
    assert km.graph.n_edges == 12


@pytest.mark.parametrize("P", [gen_cube(4), gen_cross_polytope(4)], ids=["cube", "cross"])
def test_vertex_transitive_eccentricities(P):
    rep = diameter(graph_of(P))
    assert len(set(rep.eccentricities)) == 1


def test_report_fields():
    rep = diameter(graph_of(gen_cube(3)))
    assert rep.diameter == max(rep.eccentricities) == 3
    u, w = rep.witness
    assert bfs_distances(graph_of(gen_cube(3)), u)[w] == 3
    assert rep.bounds["hirsch"] == 3
    assert rep.bounds["quasipoly"] == quasipoly_bound(3, 6)
    assert rep.checks == {"hirsch_holds": True, "quasipoly_holds": True}
    doc = rep.to_dict()
    assert set(doc["bounds"]) >= {"hirsch", "klee_walkup_lower", "barnette", "larman", "kalai_subexp", "quasipoly"}


def test_bounds_use_irredundant_count():
    P = HPolyhedron.from_rows([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]], [1, 0, 1, 0, 5])
    rep = diameter(graph_of(P))
    assert rep.n == 5 and rep.n_irredundant == 4
    assert rep.bounds["hirsch"] == 2


def test_disconnected_graph_reported_unbounded():
    from polydiam.graph import PolytopeGraph
    from polydiam.vertices import IncidenceMatrix

    G = PolytopeGraph(((), ()), IncidenceMatrix((0b11, 0b1100), 4), 2, 4)
    rep = diameter(G)
    assert rep.diameter is None and not rep.connected
    assert rep.to_dict()["diameter"] == "unbounded"
    assert rep.checks["hirsch_holds"] is None


@pytest.mark.parametrize("P", [gen_cube(3), gen_cross_polytope(3), gen_random_tangent(3, 9, 4)], ids=str)
def test_facet_graph_matches_induced_subgraph(P):
    an = analyze(P)
    for f in range(P.n):
        F, fmap = facet_subpolyhedron(P, f)
        sub = analyze(F)
        to_parent = {w.id: an.index[fmap.lift(w.coords)] for w in sub.vertices}
        mapped = {frozenset((to_parent[a], to_parent[b])) for a, b in sub.graph.edges()}
        on_f = set(an.incidence.facet_vertices(f))
        induced = {frozenset(e) for e in an.graph.edges() if set(e) <= on_f}
        assert mapped == induced
