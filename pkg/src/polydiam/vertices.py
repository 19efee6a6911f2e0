"""Exact vertex enumeration and vertex-facet incidence.

Two independent enumerators are provided. ``method="brute"`` solves every
``d``-subset of constraints; ``method="dd"`` runs the double description
method on the homogenized cone in integer arithmetic. Both return the same
vertices in the same order, so each can serve as an oracle for the other.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, islice

from .hrep import HPolyhedron, PolyhedronError
from .linalg import format_rational, rank, solve_square


class NotPointedError(PolyhedronError):
    """The constraint normals do not span the space, so there are no vertices."""


class EmptyPolyhedronError(PolyhedronError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    coords: tuple
    active_set: frozenset

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "coords": [format_rational(c) for c in self.coords],
            "active": sorted(self.active_set),
        }


@dataclass(frozen=True)
class IncidenceMatrix:
    """Vertex-major incidence bits: bit ``f`` of ``rows[w]`` is set iff
    constraint ``f`` is tight at vertex ``w``."""

    rows: tuple
    n_facets: int

    @classmethod
    def from_active_sets(cls, active_sets, n_facets: int) -> "IncidenceMatrix":
        return cls(tuple(sum(1 << f for f in s) for s in active_sets), n_facets)

    @property
    def shape(self) -> tuple:
        return (len(self.rows), self.n_facets)

    def __getitem__(self, key) -> bool:
        w, f = key
        return bool(self.rows[w] >> f & 1)

    def active(self, w: int) -> frozenset:
        bits = self.rows[w]
        return frozenset(f for f in range(self.n_facets) if bits >> f & 1)

    def facet_vertices(self, f: int) -> list:
        return [w for w, bits in enumerate(self.rows) if bits >> f & 1]


def _resolve_jobs(n_jobs) -> int:
    if n_jobs is None:
        n_jobs = int(os.environ.get("POLYDIAM_THREADS", "1"))
    return max(1, int(n_jobs))


def check_pointed(P: HPolyhedron) -> None:
    if rank(P.normals) < P.dim:
        raise NotPointedError(
            f"constraint normals have rank {rank(P.normals)} < {P.dim}; the polyhedron contains a line"
        )


def _brute_worker(args) -> set:
    P, start, step = args
    found = set()
    for subset in islice(combinations(range(P.n), P.dim), start, None, step):
        x = solve_square([P.normals[i] for i in subset], [P.offsets[i] for i in subset])
        if x is not None and P.contains(x):
            found.add(tuple(x))
    return found


def _brute_points(P: HPolyhedron, n_jobs: int) -> set:
    if n_jobs == 1:
        return _brute_worker((P, 0, 1))
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        parts = pool.map(_brute_worker, [(P, k, n_jobs) for k in range(n_jobs)])
        return set().union(*parts)


def _primitive(vec) -> tuple:
    g = reduce(math.gcd, vec, 0)
    if g > 1:
        return tuple(v // g for v in vec)
    return tuple(vec)


def _integer_row(values) -> tuple:
    lcm = reduce(math.lcm, (v.denominator for v in values), 1)
    return _primitive([int(v * lcm) for v in values])


def double_description(P: HPolyhedron) -> tuple:
    """Generators of ``P`` as ``(points, rays)``.

    Works on the cone ``{(t, x) : t >= 0, offset_i t - normal_i . x >= 0}``
    whose rays with ``t > 0`` are the vertices and whose rays with ``t = 0``
    are the extreme rays of the recession cone. Requires ``P`` pointed.
    """
    check_pointed(P)
    D = P.dim + 1
    H = [(1,) + (0,) * P.dim]
    H += [_integer_row((b,) + tuple(-v for v in a)) for a, b in zip(P.normals, P.offsets)]

    basis = []
    for i, h in enumerate(H):
        if rank([H[k] for k in basis] + [h]) > len(basis):
            basis.append(i)
        if len(basis) == D:
            break
    B = [[Fraction(v) for v in H[i]] for i in basis]
    rays, zeros = [], []
    full = 0
    for i in basis:
        full |= 1 << i
    for k in range(D):
        col = solve_square(B, [Fraction(int(j == k)) for j in range(D)])
        rays.append(_integer_row(col))
        zeros.append(full & ~(1 << basis[k]))

    in_basis = set(basis)
    for i, h in enumerate(H):
        if i in in_basis:
            continue
        vals = [sum(a * b for a, b in zip(h, r)) for r in rays]
        plus = [k for k, v in enumerate(vals) if v > 0]
        minus = [k for k, v in enumerate(vals) if v < 0]
        new_rays, new_zeros = [], []
        for p in plus:
            for m in minus:
                common = zeros[p] & zeros[m]
                if common.bit_count() < D - 2:
                    continue
                if any(
                    k != p and k != m and common & ~zeros[k] == 0
                    for k in range(len(rays))
                ):
                    continue
                vp, vm = vals[p], vals[m]
                r = _primitive([vp * a - vm * b for a, b in zip(rays[m], rays[p])])
                new_rays.append(r)
                new_zeros.append(common | 1 << i)
        bit = 1 << i
        keep = [k for k, v in enumerate(vals) if v >= 0]
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_zeros

    points, recession = set(), set()
    for r in rays:
        if r[0] > 0:
            points.add(tuple(Fraction(v, r[0]) for v in r[1:]))
        else:
            recession.add(r[1:])
    return points, sorted(recession)


def enumerate_vertices(P: HPolyhedron, method: str = "dd", n_jobs=None) -> tuple:
    """All extreme points of ``P`` with their full active sets.

    Vertices are sorted lexicographically by coordinates and numbered in
    that order. ``n_jobs`` only affects ``method="brute"``; the result does
    not depend on it.
    """
    check_pointed(P)
    if method == "dd":
        points, _ = double_description(P)
    elif method == "brute":
        points = _brute_points(P, _resolve_jobs(n_jobs))
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    if not points:
        raise EmptyPolyhedronError("the inequality system has no feasible basic solution")
    vertices = [
        Vertex(i, x, P.tight_set(x)) for i, x in enumerate(sorted(points))
    ]
    incidence = IncidenceMatrix.from_active_sets([v.active_set for v in vertices], P.n)
    return vertices, incidence


def is_bounded(P: HPolyhedron) -> bool:
    """True iff the recession cone of the (pointed) polyhedron is ``{0}``."""
    _, rays = double_description(P)
    return not rays


def redundant_rows(P: HPolyhedron, vertices) -> frozenset:
    """Rows tight at no vertex.

    Every facet of a pointed polyhedron contains a vertex, so such rows
    never define a facet (and cannot bound an unbounded edge either).
    """
    touched = set()
    for v in vertices:
        touched |= v.active_set
    return frozenset(range(P.n)) - touched
