"""Recursive vertex-to-vertex paths with certified length.

Given vertices ``v`` and ``u`` of a ``d``-polyhedron with ``n`` facets, grow
balls around each until they touch more than ``n // 2`` facets. The two
balls then share a facet ``F``; walk from ``v`` and from ``u`` to ``F`` and
connect the two entry points by recursing inside ``F`` (dimension ``d - 1``,
at most ``n - 1`` facets). Each level is checked against the recurrence
table, so a finished trace certifies

    length <= f(d - 1, n - 1) + 2 f(d, n // 2) + 2 = f(d, n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .bounds import kk_recurrence
from .graph import Analysis, PolytopeGraph, analyze, bfs_distances, build_graph, shortest_path
from .hrep import HPolyhedron, PolyhedronError, facet_subpolyhedron
from .linalg import format_rational, rank
from .vertices import IncidenceMatrix, enumerate_vertices


class NoCommonFacetError(RuntimeError):
    """The two balls share no facet. Cannot happen on valid input."""


class InvariantViolation(RuntimeError):
    """A certified bound failed; signals a bug rather than bad input."""


class ResultNotPointed(PolyhedronError):
    pass


def ball_facets(G: PolytopeGraph, incidence: IncidenceMatrix, v: int, k: int, dist=None) -> frozenset:
    """Facets incident to some vertex within distance ``k`` of ``v``."""
    if k < 0:
        raise ValueError("radius must be non-negative")
    if dist is None:
        dist = bfs_distances(G, v)
    bits = 0
    for w, dw in enumerate(dist):
        if dw is not None and dw <= k:
            bits |= incidence.rows[w]
    return frozenset(f for f in range(incidence.n_facets) if bits >> f & 1)


def expansion_radius(G: PolytopeGraph, incidence: IncidenceMatrix, v: int, n: int, dist=None) -> int:
    """Largest ``k`` whose ball around ``v`` touches at most ``n // 2`` facets.

    Returns 0 when the radius-0 ball already exceeds ``n // 2``.
    """
    if dist is None:
        dist = bfs_distances(G, v)
    reach = max(x for x in dist if x is not None)
    half = n // 2
    k = 0
    while k <= reach and len(ball_facets(G, incidence, v, k + 1, dist)) <= half:
        k += 1
    if k > reach:
        raise ValueError(
            f"the ball around vertex {v} never touches more than {half} facets; "
            "n must count only facets reachable in the graph"
        )
    return k


def is_degenerate_radius(G: PolytopeGraph, incidence: IncidenceMatrix, v: int, n: int) -> bool:
    """True when even the radius-0 ball touches more than ``n // 2`` facets."""
    return len(incidence.active(v)) > n // 2


@dataclass(frozen=True)
class CommonFacet:
    facet: int
    path_v: list
    path_u: list


def _path_to_facet(G: PolytopeGraph, incidence: IncidenceMatrix, source: int, facet: int, dist) -> list:
    on_facet = [w for w in incidence.facet_vertices(facet) if dist[w] is not None]
    nearest = min(dist[w] for w in on_facet)
    entry = min(w for w in on_facet if dist[w] == nearest)
    return shortest_path(G, source, entry, dist)


def find_common_facet(G, incidence, v: int, u: int, n: int, k_v: Optional[int] = None,
                      k_u: Optional[int] = None, dist_v=None, dist_u=None) -> CommonFacet:
    """Lowest-index facet touched by both the ``(k_v+1)``-ball of ``v`` and
    the ``(k_u+1)``-ball of ``u``, with shortest paths onto it."""
    if dist_v is None:
        dist_v = bfs_distances(G, v)
    if dist_u is None:
        dist_u = bfs_distances(G, u)
    if k_v is None:
        k_v = expansion_radius(G, incidence, v, n, dist_v)
    if k_u is None:
        k_u = expansion_radius(G, incidence, u, n, dist_u)
    shared = ball_facets(G, incidence, v, k_v + 1, dist_v) & ball_facets(G, incidence, u, k_u + 1, dist_u)
    if not shared:
        raise NoCommonFacetError(f"balls around {v} (radius {k_v + 1}) and {u} (radius {k_u + 1}) are disjoint")
    F = min(shared)
    path_v = _path_to_facet(G, incidence, v, F, dist_v)
    path_u = _path_to_facet(G, incidence, u, F, dist_u)
    if len(path_v) - 1 > k_v + 1 or len(path_u) - 1 > k_u + 1:
        raise InvariantViolation(f"entry path to facet {F} longer than the ball radius")
    return CommonFacet(F, path_v, path_u)


@dataclass
class KKTrace:
    d: int
    n: int
    v: int
    u: int
    kind: str
    path: list
    bound: int
    k_v: Optional[int] = None
    k_u: Optional[int] = None
    degenerate_v: bool = False
    degenerate_u: bool = False
    facet: Optional[int] = None
    eliminated: Optional[int] = None
    path_v: list = field(default_factory=list)
    path_u: list = field(default_factory=list)
    inner: Optional["KKTrace"] = None

    @property
    def length(self) -> int:
        return len(self.path) - 1

    def levels(self):
        t = self
        while t is not None:
            yield t
            t = t.inner

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "n": self.n,
            "from": self.v,
            "to": self.u,
            "kind": self.kind,
            "length": self.length,
            "bound": self.bound,
            "path": self.path,
        }
        if self.kind == "recursive":
            out.update(
                k_v=self.k_v,
                k_u=self.k_u,
                degenerate_v=self.degenerate_v,
                degenerate_u=self.degenerate_u,
                facet=self.facet,
                eliminated_coordinate=self.eliminated,
                path_v=self.path_v,
                path_u=self.path_u,
                inner=self.inner.to_dict(),
            )
        return out

    def summary(self) -> str:
        return f"len={self.length} <= f({self.d},{self.n})={self.bound}"


@dataclass(frozen=True)
class _FacetLevel:
    analysis: Analysis
    facet_map: object
    down: dict
    up: tuple


def _facet_level(an: Analysis, F: int) -> _FacetLevel:
    level = an.facet_levels.get(F)
    if level is None:
        sub, fmap = facet_subpolyhedron(an.P, F)
        sub_an = analyze(sub)
        up = tuple(an.index[fmap.lift(w.coords)] for w in sub_an.vertices)
        level = an.facet_levels[F] = _FacetLevel(sub_an, fmap, {p: s for s, p in enumerate(up)}, up)
    return level


def _kk(an: Analysis, v: int, u: int) -> KKTrace:
    P, G, inc = an.P, an.graph, an.incidence
    d, n = P.dim, an.n_irredundant
    bound = kk_recurrence(d, n)
    if v == u:
        return KKTrace(d, n, v, u, "trivial", [v], bound)
    if d <= 2 or G.n_vertices <= 2 or n <= d + 2:
        path = shortest_path(G, v, u)
        if path is None:
            raise ValueError(f"vertices {v} and {u} are not connected")
        trace = KKTrace(d, n, v, u, "bfs", path, bound)
    else:
        dist_v, dist_u = an.distances(v), an.distances(u)
        k_v = expansion_radius(G, inc, v, n, dist_v)
        k_u = expansion_radius(G, inc, u, n, dist_u)
        common = find_common_facet(G, inc, v, u, n, k_v, k_u, dist_v, dist_u)
        level = _facet_level(an, common.facet)
        fmap = level.facet_map
        inner = _kk(level.analysis, level.down[common.path_v[-1]], level.down[common.path_u[-1]])
        lifted = [level.up[w] for w in inner.path]
        path = common.path_v[:-1] + lifted + common.path_u[::-1][1:]
        trace = KKTrace(
            d, n, v, u, "recursive", path, bound,
            k_v=k_v, k_u=k_u,
            degenerate_v=is_degenerate_radius(G, inc, v, n),
            degenerate_u=is_degenerate_radius(G, inc, u, n),
            facet=common.facet, eliminated=fmap.eliminated,
            path_v=common.path_v, path_u=common.path_u, inner=inner,
        )
        step = kk_recurrence(d - 1, n - 1) + 2 * kk_recurrence(d, n // 2) + 2
        if inner.length > kk_recurrence(d - 1, n - 1) or trace.length > step:
            raise InvariantViolation(f"level d={d}, n={n}: {trace.summary()} breaks the recurrence split")
    if trace.length > bound:
        raise InvariantViolation(f"level d={d}, n={n}: {trace.summary()} fails")
    return trace


def kk_path(P: HPolyhedron, G: PolytopeGraph = None, incidence: IncidenceMatrix = None,
            v: int = 0, u: int = 0) -> KKTrace:
    """Build the recursive ``v -> u`` path and its certificate.

    ``G`` and ``incidence`` may be passed to skip re-enumeration; they must
    come from ``P``.
    """
    an = analyze(P)
    if G is not None and G.adjacency != an.graph.adjacency:
        raise ValueError("graph does not belong to this polyhedron")
    for w in (v, u):
        if not 0 <= w < an.graph.n_vertices:
            raise IndexError(f"vertex {w} out of range")
    return _kk(an, v, u)


def restricted_polyhedron(P: HPolyhedron, G: PolytopeGraph, incidence: IncidenceMatrix, v: int,
                          k_v: int) -> HPolyhedron:
    """Keep only the rows whose facets lie within distance ``k_v`` of ``v``.

    Labels of the result are the kept row indices of ``P``.
    """
    rows = sorted(ball_facets(G, incidence, v, k_v))
    Q = HPolyhedron(P.dim, tuple(P.normals[i] for i in rows), tuple(P.offsets[i] for i in rows), tuple(rows))
    if rank(Q.normals) < Q.dim:
        raise ResultNotPointed(f"restriction around vertex {v} keeps only rank-deficient rows")
    return Q


@dataclass
class OmegaCheck:
    omega: int
    distance_in_q: Optional[int]
    status: str


@dataclass
class QLemmaReport:
    v: int
    k_v: int
    n: int
    q_rows: list
    degenerate: bool
    status: str
    reason: str = ""
    omegas: list = field(default_factory=list)
    radius_bound: Optional[int] = None
    radius_bound_holds: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "k_v": self.k_v,
            "n": self.n,
            "q_rows": self.q_rows,
            "degenerate": self.degenerate,
            "status": self.status,
            "reason": self.reason,
            "omegas": [
                {"omega": o.omega, "distance_in_q": o.distance_in_q, "status": o.status}
                for o in self.omegas
            ],
            "radius_bound": self.radius_bound,
            "radius_bound_holds": self.radius_bound_holds,
        }


def verify_q_lemma(P: HPolyhedron, v: int) -> QLemmaReport:
    """Check that vertices at distance ``k_v`` from ``v`` stay at distance
    ``k_v`` after dropping every facet the ``k_v``-ball does not touch."""
    an = analyze(P)
    G, inc = an.graph, an.incidence
    n = an.n_irredundant
    dist = bfs_distances(G, v)
    k_v = expansion_radius(G, inc, v, n, dist)
    degenerate = is_degenerate_radius(G, inc, v, n)
    rows = sorted(ball_facets(G, inc, v, k_v, dist))
    report = QLemmaReport(v, k_v, n, rows, degenerate, "pass")
    report.radius_bound = kk_recurrence(P.dim, max(1, n // 2))
    report.radius_bound_holds = k_v <= report.radius_bound
    try:
        Q = restricted_polyhedron(P, G, inc, v, k_v)
        q_vertices, q_inc = enumerate_vertices(Q)
    except PolyhedronError as exc:
        report.status, report.reason = "skipped", str(exc)
        return report
    q_index = {w.coords: w.id for w in q_vertices}
    GQ = build_graph(q_vertices, q_inc, Q)
    qv = q_index.get(an.vertices[v].coords)
    if qv is None:
        report.status, report.reason = "skipped", "v has no counterpart among the vertices of Q"
        return report
    q_dist = bfs_distances(GQ, qv)
    for w, dw in enumerate(dist):
        if dw != k_v:
            continue
        qw = q_index.get(an.vertices[w].coords)
        if qw is None:
            report.omegas.append(OmegaCheck(w, None, "not comparable"))
            continue
        ok = q_dist[qw] == k_v
        report.omegas.append(OmegaCheck(w, q_dist[qw], "pass" if ok else "fail"))
    statuses = {o.status for o in report.omegas}
    if "fail" in statuses or not report.radius_bound_holds:
        report.status = "fail"
    elif "not comparable" in statuses:
        report.status, report.reason = "partial", "some vertices at distance k_v are not vertices of Q"
    return report


def balls_intersect(G: PolytopeGraph, incidence: IncidenceMatrix, v: int, u: int, n: int) -> bool:
    """Whether the ``(k_v+1)``- and ``(k_u+1)``-balls share a facet."""
    k_v = expansion_radius(G, incidence, v, n)
    k_u = expansion_radius(G, incidence, u, n)
    return bool(ball_facets(G, incidence, v, k_v + 1) & ball_facets(G, incidence, u, k_u + 1))


def is_valid_walk(G: PolytopeGraph, path: list, v: int, u: int) -> bool:
    """Endpoints are ``v`` and ``u`` and consecutive ids are adjacent."""
    if not path or path[0] != v or path[-1] != u:
        return False
    return all(G.is_edge(a, b) for a, b in zip(path, path[1:]))
