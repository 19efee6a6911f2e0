"""Deterministic H-representations of standard polytope families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .hrep import HPolyhedron, PolyhedronError
from .linalg import to_rational

# direction vectors are rounded to this denominator
GRID = 2 ** 16
MAX_CROSS_DIM = 12


class DegenerateSample(PolyhedronError):
    """A random instance came out degenerate or unbounded; try another seed."""


def gen_cube(d: int) -> HPolyhedron:
    if d < 1:
        raise ValueError("cube dimension must be >= 1")
    normals, offsets = [], []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        normals.append(e)
        offsets.append(1)
        normals.append([-v for v in e])
        offsets.append(0)
    return HPolyhedron.from_rows(normals, offsets)


def gen_simplex(d: int) -> HPolyhedron:
    if d < 1:
        raise ValueError("simplex dimension must be >= 1")
    normals = [[-int(i == j) for j in range(d)] for i in range(d)]
    offsets = [0] * d
    normals.append([1] * d)
    offsets.append(1)
    return HPolyhedron.from_rows(normals, offsets)


def gen_cross_polytope(d: int) -> HPolyhedron:
    if d < 2:
        raise ValueError("cross-polytope dimension must be >= 2")
    if d > MAX_CROSS_DIM:
        raise ValueError(f"cross-polytope needs 2^d rows; d > {MAX_CROSS_DIM} rejected")
    normals = [list(signs) for signs in product((1, -1), repeat=d)]
    return HPolyhedron.from_rows(normals, [1] * len(normals))


def _rationalize(values) -> list:
    return [Fraction(round(v * GRID), GRID) for v in values]


def gen_polygon(n: int) -> HPolyhedron:
    """Near-regular n-gon: tangent lines ``u_i . x <= 1`` with directions
    rounded to the ``1/2**16`` grid."""
    if n < 3:
        raise ValueError("a polygon needs at least 3 sides")
    normals = [
        _rationalize((math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)))
        for i in range(n)
    ]
    return HPolyhedron.from_rows(normals, [1] * n)


def gen_product(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    zero = Fraction(0)
    normals = [tuple(a) + (zero,) * Q.dim for a in P.normals]
    normals += [(zero,) * P.dim + tuple(a) for a in Q.normals]
    labels = None
    if P.labels is not None and Q.labels is not None:
        labels = P.labels + Q.labels
    return HPolyhedron(P.dim + Q.dim, tuple(normals), P.offsets + Q.offsets, labels)


def gen_klee_minty(d: int, eps=Fraction(1, 3)) -> HPolyhedron:
    """``0 <= x_1 <= 1`` and ``eps x_{i-1} <= x_i <= 1 - eps x_{i-1}``."""
    eps = to_rational(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("Klee-Minty deformation needs 0 < eps < 1/2")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    normals, offsets = [], []
    for i in range(d):
        lower = [Fraction(0)] * d
        upper = [Fraction(0)] * d
        lower[i] = Fraction(-1)
        upper[i] = Fraction(1)
        if i > 0:
            lower[i - 1] = eps
            upper[i - 1] = eps
        normals += [lower, upper]
        offsets += [0, 1]
    return HPolyhedron.from_rows(normals, offsets)


def gen_random_tangent(d: int, m: int, seed: int) -> HPolyhedron:
    """``m`` hyperplanes tangent to the unit sphere at random directions.

    Directions are standard normal draws from numpy's PCG64 seeded with
    ``seed``, normalized and rounded to the ``1/2**16`` grid. The result is
    checked to be bounded and simple; otherwise :class:`DegenerateSample`.
    """
    from .graph import build_graph
    from .vertices import enumerate_vertices, is_bounded

    if m < d + 1:
        raise ValueError("need m >= d + 1 tangent hyperplanes")
    rng = np.random.Generator(np.random.PCG64(seed))
    normals = []
    for _ in range(m):
        u = rng.standard_normal(d)
        normals.append(_rationalize(u / np.linalg.norm(u)))
    try:
        P = HPolyhedron.from_rows(normals, [1] * m)
        if not is_bounded(P):
            raise DegenerateSample(f"seed {seed}: directions do not positively span, unbounded")
        vertices, incidence = enumerate_vertices(P)
    except DegenerateSample:
        raise
    except PolyhedronError as exc:
        raise DegenerateSample(f"seed {seed}: {exc}") from exc
    if any(len(v.active_set) != d for v in vertices):
        raise DegenerateSample(f"seed {seed}: sample is not simple")
    G = build_graph(vertices, incidence, P)
    if any(len(nbrs) < d for nbrs in G.adjacency):
        raise DegenerateSample(f"seed {seed}: a vertex has fewer than {d} bounded edges")
    return P


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)


FAMILIES = ("cube", "simplex", "cross", "polygon", "polygon-product", "klee-minty", "random-tangent")


def generate(spec: FamilySpec) -> HPolyhedron:
    p = spec.params
    if spec.family == "cube":
        return gen_cube(p["d"])
    if spec.family == "simplex":
        return gen_simplex(p["d"])
    if spec.family == "cross":
        return gen_cross_polytope(p["d"])
    if spec.family == "polygon":
        return gen_polygon(p["n"])
    if spec.family == "polygon-product":
        return gen_product(gen_polygon(p["p"]), gen_polygon(p["q"]))
    if spec.family == "klee-minty":
        return gen_klee_minty(p["d"], p.get("eps", Fraction(1, 3)))
    if spec.family == "random-tangent":
        return gen_random_tangent(p["d"], p["m"], p.get("seed", 0))
    raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
