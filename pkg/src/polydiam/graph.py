"""Vertex-edge graph of a polyhedron, distances and the diameter report."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .bounds import comparison_bounds, kk_recurrence, quasipoly_bound
from .hrep import HPolyhedron
from .linalg import rank
from .vertices import IncidenceMatrix, enumerate_vertices


@dataclass(frozen=True)
class PolytopeGraph:
    """``adjacency[w]`` is the sorted tuple of neighbours of vertex ``w``."""

    adjacency: tuple
    incidence: IncidenceMatrix
    d: int
    n: int

    @property
    def n_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def n_irredundant(self) -> int:
        touched = 0
        for bits in self.incidence.rows:
            touched |= bits
        return touched.bit_count()

    def edges(self) -> list:
        return [(u, w) for u, nbrs in enumerate(self.adjacency) for w in nbrs if u < w]

    def is_edge(self, u: int, w: int) -> bool:
        return w in self.adjacency[u]


def build_graph(vertices, incidence: IncidenceMatrix, P: HPolyhedron) -> PolytopeGraph:
    """Join two vertices iff the normals tight at both have rank ``d - 1``.

    The rank test (rather than counting shared facets) keeps edges of
    non-simple polytopes correct.
    """
    d = P.dim
    rows = incidence.rows
    ranks = {}
    adj = [[] for _ in vertices]
    for u in range(len(rows)):
        for w in range(u + 1, len(rows)):
            common = rows[u] & rows[w]
            if common.bit_count() < d - 1:
                continue
            r = ranks.get(common)
            if r is None:
                r = rank([P.normals[f] for f in range(P.n) if common >> f & 1]) if common else 0
                ranks[common] = r
            if r == d - 1:
                adj[u].append(w)
                adj[w].append(u)
    return PolytopeGraph(tuple(tuple(sorted(a)) for a in adj), incidence, d, P.n)


def bfs_distances(G: PolytopeGraph, source: int) -> list:
    """Edge-count distances from ``source``; ``None`` marks unreachable vertices."""
    if not 0 <= source < G.n_vertices:
        raise IndexError(f"vertex {source} out of range")
    dist = [None] * G.n_vertices
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in G.adjacency[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path(G: PolytopeGraph, source: int, target: int, dist: Optional[list] = None) -> Optional[list]:
    """A shortest path ``source -> target``, walking back from ``target`` via
    the smallest-id neighbour one step closer. ``None`` if unreachable."""
    if dist is None:
        dist = bfs_distances(G, source)
    if dist[target] is None:
        return None
    path = [target]
    w = target
    while w != source:
        w = min(x for x in G.adjacency[w] if dist[x] == dist[w] - 1)
        path.append(w)
    return path[::-1]


@dataclass
class DiameterReport:
    d: int
    n: int
    n_irredundant: int
    vertices: int
    edges: int
    diameter: Optional[int]
    witness: Optional[tuple]
    eccentricities: list
    bounds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def connected(self) -> bool:
        return self.diameter is not None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "n_irredundant": self.n_irredundant,
            "vertices": self.vertices,
            "edges": self.edges,
            "diameter": self.diameter if self.connected else "unbounded",
            "witness": list(self.witness) if self.witness else None,
            "eccentricities": self.eccentricities,
            "bounds": self.bounds,
            "checks": self.checks,
        }

    def summary(self) -> str:
        if not self.connected:
            return f"diameter=unbounded (graph disconnected), d={self.d}, n={self.n_irredundant}"
        return (
            f"diameter={self.diameter} witness={self.witness[0]}-{self.witness[1]} "
            f"d={self.d} n={self.n_irredundant} hirsch={'ok' if self.checks['hirsch_holds'] else 'VIOLATED'}"
        )


def bound_fields(d: int, n: int) -> dict:
    """All bound values reported for an instance with ``n`` facets in dimension ``d``."""
    out = comparison_bounds(d, n).to_dict()
    out["quasipoly"] = quasipoly_bound(d, n) if n >= 2 else None
    out["kk_recurrence"] = kk_recurrence(d, n)
    return out


def diameter(G: PolytopeGraph) -> DiameterReport:
    ecc = []
    best, witness = -1, None
    connected = True
    for s in range(G.n_vertices):
        dist = bfs_distances(G, s)
        if any(x is None for x in dist):
            connected = False
            ecc.append(None)
            continue
        e = max(dist)
        ecc.append(e)
        if e > best:
            best, witness = e, (s, dist.index(e))
    n_irr = G.n_irredundant
    bounds = bound_fields(G.d, n_irr)
    if connected:
        checks = {
            "hirsch_holds": best <= bounds["hirsch"],
            "quasipoly_holds": bounds["quasipoly"] is None or best <= bounds["quasipoly"],
        }
    else:
        checks = {"hirsch_holds": None, "quasipoly_holds": None}
    return DiameterReport(
        d=G.d,
        n=G.n,
        n_irredundant=n_irr,
        vertices=G.n_vertices,
        edges=G.n_edges,
        diameter=best if connected else None,
        witness=witness if connected else None,
        eccentricities=ecc,
        bounds=bounds,
        checks=checks,
    )


@dataclass(frozen=True)
class Analysis:
    """Enumeration plus graph of one polyhedron, with a coordinate lookup."""

    P: HPolyhedron
    vertices: tuple
    incidence: IncidenceMatrix
    graph: PolytopeGraph
    index: dict = field(compare=False, hash=False)
    _dist: dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    facet_levels: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def n_irredundant(self) -> int:
        return self.graph.n_irredundant

    def distances(self, v: int) -> list:
        """Cached :func:`bfs_distances`; treat the result as read-only."""
        dist = self._dist.get(v)
        if dist is None:
            dist = self._dist[v] = bfs_distances(self.graph, v)
        return dist


@lru_cache(maxsize=4096)
def analyze(P: HPolyhedron) -> Analysis:
    vertices, incidence = enumerate_vertices(P)
    G = build_graph(vertices, incidence, P)
    return Analysis(P, tuple(vertices), incidence, G, {v.coords: v.id for v in vertices})
