"""Exact rational linear algebra.

Everything here works on :class:`fractions.Fraction` values, which are
always stored in lowest terms with a positive denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(token: str) -> Fraction:
    token = token.strip()
    num, sep, den = token.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational number: {token!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {token!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    """Serialize as ``p/q``, or ``p`` when the denominator is one."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RMatrix:
    """Immutable dense matrix of rationals, stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entries length {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: Optional[int] = None) -> "RMatrix":
        rows = [tuple(to_rational(v) for v in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RMatrix":
        return RMatrix.from_rows(
            [[self.entries[i * self.cols + j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )


def _as_rows(M) -> list:
    if isinstance(M, RMatrix):
        return M.to_rows()
    return [[to_rational(v) for v in r] for r in M]


def _row_echelon(rows: list, ncols: int) -> tuple:
    """In-place Gauss-Jordan elimination; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(M) -> int:
    """Rank over the rationals. Accepts an RMatrix or a sequence of rows."""
    rows = _as_rows(M)
    if not rows:
        return 0
    _, pivots = _row_echelon(rows, len(rows[0]))
    return len(pivots)


def solve_square(M, b: Sequence) -> Optional[list]:
    """Solve ``M x = b`` for square ``M``.

    Returns ``None`` when ``M`` is singular. Raises ``ValueError`` on a
    dimension mismatch.
    """
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows) or len(b) != n:
        raise ValueError("solve_square needs an n x n matrix and a length-n vector")
    aug = [r + [to_rational(v)] for r, v in zip(rows, b)]
    aug, pivots = _row_echelon(aug, n)
    if len(pivots) < n:
        return None
    return [aug[i][n] for i in range(n)]


def nullspace(M, ncols: Optional[int] = None) -> list:
    """Basis of the right null space of ``M`` (one vector per free column)."""
    rows = _as_rows(M)
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    rows, pivots = _row_echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(vec)
    return basis


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))
