"""Polyhedra given by linear inequalities, and their text file format.

A polyhedron is stored as rows ``normal . x <= offset``. On disk each row is
written as ``offset -normal_1 ... -normal_d`` (that is ``b - a.x >= 0``)::

    H-representation
    begin
     4 3 rational
     1 -1 0
     0 1 0
     1 0 -1
     0 0 1
    end
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import format_rational, parse_rational, to_rational


class PolyhedronError(ValueError):
    """Invalid polyhedron data."""


class ZeroNormalError(PolyhedronError):
    pass


class DuplicateConstraintError(PolyhedronError):
    pass


class EmptyFacetError(PolyhedronError):
    """Restricting to a facet produced an infeasible row ``0 <= c`` with ``c < 0``."""


class HRepParseError(ValueError):
    """Base class for file format errors; ``line`` is 1-based."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeaderError(HRepParseError):
    pass


class RowArityError(HRepParseError):
    pass


class ZeroNormalRowError(HRepParseError):
    pass


class DuplicateRowError(HRepParseError):
    pass


def _direction_key(normal: Sequence[Fraction], offset: Fraction) -> tuple:
    # two rows are positive multiples of each other iff their keys agree
    scale = abs(next(v for v in normal if v != 0))
    return tuple(v / scale for v in normal) + (offset / scale,)


@dataclass(frozen=True, eq=True)
class HPolyhedron:
    """``{x in Q^dim : normals[i] . x <= offsets[i] for all i}``.

    Constraint ``i`` is facet index ``i``. Instances are immutable and
    hashable; labels do not take part in equality.
    """

    dim: int
    normals: tuple
    offsets: tuple
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise PolyhedronError("dimension must be at least 1")
        if len(self.normals) < 1:
            raise PolyhedronError("need at least one constraint")
        if len(self.normals) != len(self.offsets):
            raise PolyhedronError("normals and offsets differ in length")
        if self.labels is not None and len(self.labels) != len(self.normals):
            raise PolyhedronError("one label per constraint required")
        seen = {}
        for i, (a, b) in enumerate(zip(self.normals, self.offsets)):
            if len(a) != self.dim:
                raise PolyhedronError(f"constraint {i} has {len(a)} coefficients, expected {self.dim}")
            if all(v == 0 for v in a):
                raise ZeroNormalError(f"constraint {i} has a zero normal")
            key = _direction_key(a, b)
            if key in seen:
                raise DuplicateConstraintError(
                    f"constraint {i} is a positive multiple of constraint {seen[key]}"
                )
            seen[key] = i

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.dim, self.normals, self.offsets))
            object.__setattr__(self, "_hash", h)
            return h

    @classmethod
    def from_rows(cls, normals, offsets, labels=None) -> "HPolyhedron":
        normals = tuple(tuple(to_rational(v) for v in a) for a in normals)
        offsets = tuple(to_rational(b) for b in offsets)
        if not normals:
            raise PolyhedronError("need at least one constraint")
        return cls(len(normals[0]), normals, offsets, None if labels is None else tuple(labels))

    @property
    def n(self) -> int:
        return len(self.normals)

    def slack(self, i: int, x: Sequence[Fraction]) -> Fraction:
        return self.offsets[i] - sum((a * v for a, v in zip(self.normals[i], x)), Fraction(0))

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(self.slack(i, x) >= 0 for i in range(self.n))

    def tight_set(self, x: Sequence[Fraction]) -> frozenset:
        return frozenset(i for i in range(self.n) if self.slack(i, x) == 0)

    def restrict(self, rows: Sequence[int]) -> "HPolyhedron":
        """Sub-system keeping only the listed rows, in the given order."""
        rows = list(rows)
        labels = None if self.labels is None else tuple(self.labels[i] for i in rows)
        return HPolyhedron(
            self.dim,
            tuple(self.normals[i] for i in rows),
            tuple(self.offsets[i] for i in rows),
            labels,
        )


def parse_hrep(text: str) -> HPolyhedron:
    lines = text.splitlines()
    pos = 0

    def next_content():
        nonlocal pos
        while pos < len(lines):
            pos += 1
            stripped = lines[pos - 1].strip()
            if stripped:
                return pos, stripped
        return None, None

    lineno, line = next_content()
    while line is not None and line.startswith("*"):
        lineno, line = next_content()
    if line != "H-representation":
        raise MalformedHeaderError("expected 'H-representation'", lineno)
    lineno, line = next_content()
    if line != "begin":
        raise MalformedHeaderError("expected 'begin'", lineno)
    lineno, line = next_content()
    parts = (line or "").split()
    if len(parts) != 3 or parts[2] not in ("rational", "integer"):
        raise MalformedHeaderError("expected '<n> <d+1> rational'", lineno)
    try:
        n, width = int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedHeaderError("row and column counts must be integers", lineno) from None
    if n < 1 or width < 2:
        raise MalformedHeaderError("need n >= 1 and d+1 >= 2", lineno)

    normals, offsets, seen = [], [], {}
    for i in range(n):
        lineno, line = next_content()
        if line is None or line == "end":
            raise RowArityError(f"expected {n} rows, found {i}", lineno)
        tokens = line.split()
        if len(tokens) != width:
            raise RowArityError(f"expected {width} numbers, found {len(tokens)}", lineno)
        try:
            values = [parse_rational(t) for t in tokens]
        except ValueError as exc:
            raise RowArityError(str(exc), lineno) from None
        b, a = values[0], tuple(-v for v in values[1:])
        if all(v == 0 for v in a):
            raise ZeroNormalRowError("zero normal vector", lineno)
        key = _direction_key(a, b)
        if key in seen:
            raise DuplicateRowError(f"duplicate of the row on line {seen[key]}", lineno)
        seen[key] = lineno
        normals.append(a)
        offsets.append(b)
    lineno, line = next_content()
    if line != "end":
        raise MalformedHeaderError("expected 'end' after the rows", lineno)
    return HPolyhedron(width - 1, tuple(normals), tuple(offsets))


def serialize_hrep(P: HPolyhedron) -> str:
    out = ["H-representation", "begin", f" {P.n} {P.dim + 1} rational"]
    for a, b in zip(P.normals, P.offsets):
        out.append(" " + " ".join(format_rational(v) for v in (b, *(-x for x in a))))
    out.append("end")
    return "\n".join(out) + "\n"


def read_hrep(path) -> HPolyhedron:
    with open(path, encoding="utf-8") as fh:
        return parse_hrep(fh.read())


def write_hrep(P: HPolyhedron, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_hrep(P))


@dataclass(frozen=True)
class FacetMap:
    """Affine embedding of a facet's coordinates into the ambient space.

    The facet row ``facet`` was solved for coordinate ``eliminated``; the
    remaining coordinates keep their order. ``row_origin[k]`` is the row of
    the parent polyhedron that produced row ``k`` of the facet polyhedron.
    """

    facet: int
    eliminated: int
    pivot: Fraction
    normal: tuple
    offset: Fraction
    row_origin: tuple

    def lift(self, y: Sequence[Fraction]) -> tuple:
        j = self.eliminated
        rest = sum((a * v for a, v in zip(self.normal[:j] + self.normal[j + 1:], y)), Fraction(0))
        xj = (self.offset - rest) / self.pivot
        return tuple(y[:j]) + (xj,) + tuple(y[j:])

    def project(self, x: Sequence[Fraction]) -> tuple:
        j = self.eliminated
        return tuple(x[:j]) + tuple(x[j + 1:])


def facet_subpolyhedron(P: HPolyhedron, f: int) -> tuple:
    """Intersect ``P`` with the hyperplane of row ``f`` and drop a coordinate.

    Returns ``(F, facet_map)`` where ``F`` lives in ``P.dim - 1`` variables.
    Rows that become ``0 <= c`` with ``c >= 0`` are dropped and rows that
    become positive multiples of an earlier row are merged into it.
    """
    if not 0 <= f < P.n:
        raise IndexError(f"facet index {f} out of range for {P.n} constraints")
    if P.dim < 2:
        raise PolyhedronError("a 1-dimensional polyhedron has no facet polyhedron in >= 1 variables")
    a, b = P.normals[f], P.offsets[f]
    # largest magnitude coefficient, lowest index on ties
    j = max(range(P.dim), key=lambda k: (abs(a[k]), -k))
    pivot = a[j]
    normals, offsets, origin, seen = [], [], [], set()
    for i in range(P.n):
        if i == f:
            continue
        c, e = P.normals[i], P.offsets[i]
        ratio = c[j] / pivot
        new_c = tuple(c[k] - ratio * a[k] for k in range(P.dim) if k != j)
        new_e = e - ratio * b
        if all(v == 0 for v in new_c):
            if new_e < 0:
                raise EmptyFacetError(f"facet {f} is empty: row {i} reduces to 0 <= {new_e}")
            continue
        key = _direction_key(new_c, new_e)
        if key in seen:
            continue
        seen.add(key)
        normals.append(new_c)
        offsets.append(new_e)
        origin.append(i)
    if not normals:
        raise PolyhedronError(f"facet {f} has no constraints left after substitution")
    labels = None if P.labels is None else tuple(P.labels[i] for i in origin)
    F = HPolyhedron(P.dim - 1, tuple(normals), tuple(offsets), labels)
    return F, FacetMap(f, j, pivot, a, b, tuple(origin))
