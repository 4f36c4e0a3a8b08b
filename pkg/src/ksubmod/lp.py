"""Exact rational linear programming by the simplex method.

Problems are stated as::

    minimize    c . x
    subject to  a_r . x  (<= | = | >=)  b_r     for each row r
                x_j >= lower_j   (lower_j = None means x_j is free)

and solved in dictionary form with Bland's smallest-index rule, which
cannot cycle.  Phase one uses a single auxiliary variable.  All arithmetic
is `fractions.Fraction`, so optima are exact and the returned vertex is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

RELATIONS = ("<=", "=", ">=")


@dataclass
class LinearProgram:
    c: List[Fraction]
    rows: List[Tuple[List[Fraction], str, Fraction]] = field(default_factory=list)
    lower: Optional[List[Optional[Fraction]]] = None

    def __post_init__(self):
        self.c = [Fraction(v) for v in self.c]
        n = len(self.c)
        rows = []
        for coeffs, rel, rhs in self.rows:
            if len(coeffs) != n:
                raise ValueError(f"row of width {len(coeffs)} for {n} variables")
            if rel not in RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            rows.append(([Fraction(v) for v in coeffs], rel, Fraction(rhs)))
        self.rows = rows
        if self.lower is None:
            self.lower = [Fraction(0)] * n
        elif len(self.lower) != n:
            raise ValueError("lower bounds do not match the number of variables")
        else:
            self.lower = [None if v is None else Fraction(v) for v in self.lower]

    @property
    def n_vars(self) -> int:
        return len(self.c)

    def add_row(self, coeffs, rel, rhs) -> None:
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        if len(coeffs) != self.n_vars:
            raise ValueError(f"row of width {len(coeffs)} for {self.n_vars} variables")
        self.rows.append(([Fraction(v) for v in coeffs], rel, Fraction(rhs)))

    def is_feasible(self, x: Sequence) -> bool:
        for j, v in enumerate(x):
            if self.lower[j] is not None and v < self.lower[j]:
                return False
        for coeffs, rel, rhs in self.rows:
            lhs = sum(a * v for a, v in zip(coeffs, x) if a)
            if rel == "<=" and lhs > rhs or rel == ">=" and lhs < rhs or rel == "=" and lhs != rhs:
                return False
        return True


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[Tuple[Fraction, ...]] = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Dictionary:
    """``basic[r] = b[r] - sum_j A[r][j] * nonbasic[j]``, ``z = z0 + sum_j d[j] * nonbasic[j]``."""

    def __init__(self, A, b, nonbasic, basic):
        self.A = A
        self.b = b
        self.nonbasic = nonbasic
        self.basic = basic
        self.d = [Fraction(0)] * len(nonbasic)
        self.z0 = Fraction(0)
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        A, b, d = self.A, self.b, self.d
        row = A[r]
        inv = 1 / row[j]
        new = [v * inv if v else v for v in row]
        new[j] = inv
        nb = b[r] * inv
        for q in range(len(A)):
            if q == r:
                continue
            Aq = A[q]
            f = Aq[j]
            if not f:
                continue
            for m, v in enumerate(new):
                if v:
                    Aq[m] -= f * v
            Aq[j] = -f * inv
            b[q] -= f * nb
        f = d[j]
        if f:
            for m, v in enumerate(new):
                if v:
                    d[m] -= f * v
            d[j] = -f * inv
            self.z0 += f * nb
        A[r] = new
        b[r] = nb
        self.basic[r], self.nonbasic[j] = self.nonbasic[j], self.basic[r]
        self.pivots += 1

    def run(self, max_pivots: int) -> str:
        """Primal simplex with Bland's rule from a feasible dictionary."""
        A, b, d = self.A, self.b, self.d
        while True:
            j = None
            for m, v in enumerate(d):
                if v < 0 and (j is None or self.nonbasic[m] < self.nonbasic[j]):
                    j = m
            if j is None:
                return OPTIMAL
            r = None
            best = None
            for q in range(len(A)):
                a = A[q][j]
                if a > 0:
                    key = (b[q] / a, self.basic[q])
                    if best is None or key < best:
                        best, r = key, q
            if r is None:
                return UNBOUNDED
            if self.pivots >= max_pivots:
                raise RuntimeError(f"simplex exceeded {max_pivots} pivots")
            self.pivot(r, j)


def _standard_form(lp: LinearProgram):
    """Rewrite as ``A y <= b, y >= 0`` and return a map back to ``x``."""
    columns = []  # (original index, sign)
    shift = []
    for j, lo in enumerate(lp.lower):
        if lo is None:
            columns.append((j, 1))
            columns.append((j, -1))
            shift.append(Fraction(0))
        else:
            columns.append((j, 1))
            shift.append(lo)
    A, b = [], []
    for coeffs, rel, rhs in lp.rows:
        rhs = rhs - sum(a * s for a, s in zip(coeffs, shift) if a and s)
        row = [coeffs[j] if sgn > 0 else -coeffs[j] for j, sgn in columns]
        if rel in ("<=", "="):
            A.append(row)
            b.append(rhs)
        if rel in (">=", "="):
            A.append([-v for v in row])
            b.append(-rhs)
    c = [lp.c[j] * sgn for j, sgn in columns]
    const = sum(cj * s for cj, s in zip(lp.c, shift))
    return A, b, c, const, columns, shift


def lp_min(lp: LinearProgram, max_pivots: int = 100000) -> LPResult:
    """Solve ``lp`` exactly; infeasibility and unboundedness are reported in the status."""
    A, b, c, const, columns, shift = _standard_form(lp)
    n, m = len(c), len(A)
    aux = n + m
    D = _Dictionary([list(row) for row in A], list(b), list(range(n)), list(range(n, n + m)))

    if any(v < 0 for v in b):
        for row in D.A:
            row.append(Fraction(-1))
        D.nonbasic.append(aux)
        D.d = [Fraction(0)] * n + [Fraction(1)]
        r = min(range(m), key=lambda q: (b[q], D.basic[q]))
        D.pivot(r, n)
        D.run(max_pivots)
        if D.z0 > 0:
            return LPResult(INFEASIBLE, pivots=D.pivots)
        if aux in D.basic:
            r = D.basic.index(aux)
            js = [j for j, v in enumerate(D.A[r]) if v and D.nonbasic[j] != aux]
            if js:
                D.pivot(r, min(js, key=lambda j: D.nonbasic[j]))
            else:
                del D.A[r], D.b[r], D.basic[r]
        j = D.nonbasic.index(aux)
        for row in D.A:
            del row[j]
        del D.nonbasic[j]

    D.d = [Fraction(0)] * len(D.nonbasic)
    D.z0 = Fraction(0)
    pos = {v: j for j, v in enumerate(D.nonbasic)}
    for v in range(n):
        if not c[v]:
            continue
        if v in pos:
            D.d[pos[v]] += c[v]
        else:
            r = D.basic.index(v)
            D.z0 += c[v] * D.b[r]
            for j, a in enumerate(D.A[r]):
                if a:
                    D.d[j] -= c[v] * a

    status = D.run(max_pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=D.pivots)
    y = [Fraction(0)] * n
    for r, v in enumerate(D.basic):
        if v < n:
            y[v] = D.b[r]
    x = list(shift)
    for (j, sgn), val in zip(columns, y):
        x[j] += sgn * val
    return LPResult(OPTIMAL, D.z0 + const, tuple(x), D.pivots)
