"""Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence


class Echelon:
    """Incrementally maintained row-echelon basis of a row space.

    `add` reports whether a new row increases the rank, which is all that
    greedy basis selection needs.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: List[List[Fraction]] = []
        self.pivots: List[int] = []

    def reduce(self, row: Sequence) -> List[Fraction]:
        r = [Fraction(v) for v in row]
        if len(r) != self.width:
            raise ValueError(f"row of width {len(r)}, expected {self.width}")
        for prow, p in zip(self.rows, self.pivots):
            c = r[p]
            if c:
                for j in range(p, self.width):
                    if prow[j]:
                        r[j] -= c * prow[j]
        return r

    def add(self, row: Sequence) -> bool:
        r = self.reduce(row)
        p = next((j for j, v in enumerate(r) if v), None)
        if p is None:
            return False
        inv = 1 / r[p]
        r = [v * inv for v in r]
        # keep rows fully reduced so `reduce` needs a single pass
        for prow in self.rows:
            c = prow[p]
            if c:
                for j in range(p, self.width):
                    if r[j]:
                        prow[j] -= c * r[j]
        self.rows.append(r)
        self.pivots.append(p)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    e = Echelon(len(rows[0]))
    for row in rows:
        e.add(row)
    return e.rank


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Unique solution of the square system ``A x = b``, or ``None`` if singular."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve needs a square system")
    M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                M[r] = [a - c * p for a, p in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]
