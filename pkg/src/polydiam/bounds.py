"""Diameter bound formulas and the memoized recurrence table.

The table value ``f(d, n)`` is an integer upper bound for the maximal
diameter over ``d``-dimensional polyhedra with ``n`` facets, obtained from

    f(d, n) = f(d-1, n-1) + 2 f(d, n // 2) + 2        (d >= 3, n >= d + 2)

with the base cases listed on :class:`BoundTable`. Logarithms are base 2.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import mpmath

# relative upward slack applied to floating-point bounds before comparing
SLACK = mpmath.mpf(2) ** -30
_DPS = 50


class BoundTable:
    """Memoized integer recurrence.

    Base cases (policy ``"kk-floor-v1"``):

    * ``f(d, n) = 0`` for ``n <= d``
    * ``f(1, n) = 1`` for ``n >= 2``
    * ``f(2, n) = n - 2``
    * ``f(d, d + 1) = 1``
    """

    policy = "kk-floor-v1"

    def __init__(self):
        self.memo = {}

    def __call__(self, d: int, n: int) -> int:
        if d < 1 or n < 1:
            raise ValueError(f"f(d, n) needs d >= 1 and n >= 1, got ({d}, {n})")
        key = (d, n)
        value = self.memo.get(key)
        if value is None:
            value = self._compute(d, n)
            self.memo[key] = value
        return value

    def _compute(self, d: int, n: int) -> int:
        if n <= d:
            return 0
        if d == 1:
            return 1
        if d == 2:
            return max(0, n - 2)
        if n == d + 1:
            return 1
        return self(d - 1, n - 1) + 2 * self(d, n // 2) + 2

    def fill(self, d_max: int, n_max: int) -> "BoundTable":
        for d in range(1, d_max + 1):
            for n in range(1, n_max + 1):
                self(d, n)
        return self

    def recurrence_violations(self) -> list:
        """Memoized cells in the recursive range that break the recurrence."""
        bad = []
        for (d, n), value in sorted(self.memo.items()):
            if d >= 3 and n >= d + 2:
                if value != self(d - 1, n - 1) + 2 * self(d, n // 2) + 2:
                    bad.append((d, n))
        return bad


DEFAULT_TABLE = BoundTable()


def kk_recurrence(d: int, n: int) -> int:
    return DEFAULT_TABLE(d, n)


def _round_up(x) -> float:
    if x > sys.float_info.max:
        return math.inf
    value = float(x * (1 + SLACK))
    return value


def quasipoly_bound(d: int, n: int) -> float:
    """``n ** (log2(d) + 2)``, computed at 50 digits and nudged upward."""
    if d < 1 or n < 2:
        raise ValueError("quasipoly_bound needs d >= 1 and n >= 2")
    with mpmath.workdps(_DPS):
        return _round_up(mpmath.power(n, mpmath.log(d, 2) + 2))


def kalai_subexp(d: int, n: int) -> Optional[float]:
    """``2 ** sqrt((n - d) log2(n - d))``; ``None`` when ``n <= d``."""
    m = n - d
    if m < 1:
        return None
    with mpmath.workdps(_DPS):
        return _round_up(mpmath.power(2, mpmath.sqrt(m * mpmath.log(m, 2))))


@dataclass(frozen=True)
class ComparisonBounds:
    """Classical bounds at ``(d, n)``.

    ``klee_walkup_lower`` is ``None`` outside its stated range ``n >= 2d``;
    ``barnette`` and ``larman`` are ``None`` for ``d < 3``.
    """

    d: int
    n: int
    hirsch: int
    klee_walkup_lower: Optional[int]
    barnette: Optional[int]
    larman: Optional[int]
    kalai_subexp: Optional[float]

    def to_dict(self) -> dict:
        return {
            "hirsch": self.hirsch,
            "klee_walkup_lower": self.klee_walkup_lower,
            "barnette": self.barnette,
            "larman": self.larman,
            "kalai_subexp": self.kalai_subexp,
        }


def hirsch(d: int, n: int) -> int:
    return n - d


def klee_walkup_lower(d: int, n: int) -> Optional[int]:
    if n < 2 * d:
        return None
    return n - d + d // 5


def barnette(d: int, n: int) -> Optional[int]:
    return n * 3 ** (d - 3) if d >= 3 else None


def larman(d: int, n: int) -> Optional[int]:
    return n * 2 ** (d - 3) if d >= 3 else None


def comparison_bounds(d: int, n: int) -> ComparisonBounds:
    return ComparisonBounds(
        d=d,
        n=n,
        hirsch=hirsch(d, n),
        klee_walkup_lower=klee_walkup_lower(d, n),
        barnette=barnette(d, n),
        larman=larman(d, n),
        kalai_subexp=kalai_subexp(d, n),
    )


@dataclass
class GridReport:
    d_max: int
    n_max: int
    cells: int = 0
    violations: list = field(default_factory=list)
    max_ratio: float = 0.0
    argmax: tuple = (0, 0)
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        d, n = self.argmax
        return (
            f"{status}: {self.cells} cells, {len(self.violations)} violations, "
            f"max f/bound = {self.max_ratio:.6g} at (d={d}, n={n})"
        )


def verify_theorem_grid(d_max: int, n_max: int, table: BoundTable = None, keep_rows: bool = False) -> GridReport:
    """Check ``f(d, n) <= n ** (log2 d + 2)`` for ``3 <= d <= d_max``, ``d < n <= n_max``."""
    if d_max < 3 or n_max < d_max + 1:
        raise ValueError("need d_max >= 3 and n_max >= d_max + 1")
    table = table if table is not None else DEFAULT_TABLE
    report = GridReport(d_max, n_max)
    for d in range(3, d_max + 1):
        for n in range(d + 1, n_max + 1):
            f = table(d, n)
            bound = quasipoly_bound(d, n)
            ratio = f / bound
            report.cells += 1
            if f > bound:
                report.violations.append((d, n, f, bound))
            if ratio > report.max_ratio:
                report.max_ratio, report.argmax = ratio, (d, n)
            if keep_rows:
                report.rows.append((d, n, f, bound, f <= bound))
    return report
