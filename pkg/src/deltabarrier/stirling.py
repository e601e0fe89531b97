"""Exact combinatorics backing the branch-remainder series.

Unsigned Stirling numbers of the first kind (cycle counts) are built with
integer arithmetic from the recurrence

    [p+1, q] = p * [p, q] + [p, q-1],

and the series coefficients derived from them are kept as exact rationals.
Floating point enters only as a final rendering, so none of the downstream
truncation-error budget is spent on coefficient error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import CapacityError

DEFAULT_MAX_P = 128


@dataclass(frozen=True)
class StirlingTable:
    """Triangle of cycle counts: rows[p][q] = permutations of p objects
    with exactly q cycles, for 0 <= q <= p <= max_p."""

    max_p: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, max_p: int = DEFAULT_MAX_P) -> "StirlingTable":
        if max_p < 0:
            raise ValueError("max_p must be nonnegative")
        rows = [(1,)]
        for p in range(1, max_p + 1):
            prev = rows[p - 1]
            row = [0] * (p + 1)
            for q in range(1, p + 1):
                above = prev[q] if q < p else 0
                row[q] = (p - 1) * above + prev[q - 1]
            rows.append(tuple(row))
        return cls(max_p=max_p, rows=tuple(rows))

    def entry(self, p: int, q: int) -> int:
        if p < 0 or q < 0:
            raise ValueError("Stirling indices must be nonnegative")
        if p > self.max_p:
            raise CapacityError(
                f"p={p} exceeds the Stirling table limit max_p={self.max_p}"
            )
        if q > p:
            return 0
        return self.rows[p][q]


@lru_cache(maxsize=None)
def _default_table() -> StirlingTable:
    return StirlingTable.build(DEFAULT_MAX_P)


def stirling_cycle(p: int, q: int) -> int:
    """Unsigned Stirling number of the first kind, exact.

    Pure and deterministic; reads from a memoized triangle with limit
    DEFAULT_MAX_P (a CapacityError names the limit beyond it).
    """
    return _default_table().entry(p, q)


@dataclass(frozen=True)
class SeriesCoefficient:
    """One coefficient of the double remainder series.

    value is the exact rational (-1)^j [j+m, j+1] / m!; as_float is its
    double rendering, produced once here and consumed by the series
    evaluator.
    """

    j: int
    m: int
    value: Fraction
    as_float: float


def series_coefficient(j: int, m: int) -> SeriesCoefficient:
    """Coefficient of log^m(zeta) / zeta^(j+m) in the remainder series."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    if m < 1:
        raise ValueError("m must be positive")
    value = Fraction((-1) ** j * stirling_cycle(j + m, j + 1), factorial(m))
    return SeriesCoefficient(j=j, m=m, value=value, as_float=float(value))


def coefficient_triangle(max_weight: int) -> list[SeriesCoefficient]:
    """All coefficients with total weight j + m <= max_weight, ordered by
    weight then by m.  Used by the debug CSV dump."""
    out = []
    for n in range(1, max_weight + 1):
        for m in range(1, n + 1):
            out.append(series_coefficient(n - m, m))
    return out
