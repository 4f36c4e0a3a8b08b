"""The k-submodular polyhedron P(f) and its relatives.

A full vector is an ``n x k`` matrix of rationals stored as a tuple of rows;
``x[i][l-1]`` is the value of leaf ``l`` at coordinate ``i``.  P(f) is cut out
by one row per labeling (``x(T) <= f(T)``) and one per unordered leaf pair at
each coordinate (``x[i][p] + x[i][q] <= 0``).  P_FT(f) keeps only the
labeling rows.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from .domain import ROOT, Labeling, enumerate_labelings, join_vec, meet_vec
from .dual import SignedVector
from .functions import ValuedFunction, brute_force_min, check_k_modular_on
from .linalg import Echelon, solve
from .lp import LinearProgram, lp_min
from .minmax import max_dual

FullVector = Tuple[Tuple[Fraction, ...], ...]


class PairRow(NamedTuple):
    """The pair constraint ``x[i][p] + x[i][q] <= 0`` (leaves ``p < q``)."""

    i: int
    p: int
    q: int


Row = Union[Labeling, PairRow]


class Violation(NamedTuple):
    row: Row
    lhs: Fraction
    rhs: Fraction


def full_vector(rows: Sequence[Sequence]) -> FullVector:
    x = tuple(tuple(Fraction(v) for v in row) for row in rows)
    if len({len(r) for r in x}) > 1:
        raise ValueError("rows of a full vector must have equal length")
    return x


def zeros(n: int, k: int) -> FullVector:
    return tuple((Fraction(0),) * k for _ in range(n))


def _shape(x: FullVector) -> Tuple[int, int]:
    return len(x), len(x[0]) if x else 0


def _check(f: ValuedFunction, x: FullVector) -> None:
    if _shape(x) != (f.n, f.k):
        raise ValueError(f"full vector of shape {_shape(x)} for n={f.n}, k={f.k}")


def eval_full(x: FullVector, T: Labeling) -> Fraction:
    if len(T) != len(x):
        raise ValueError(f"labeling of length {len(T)} for {len(x)} rows")
    return sum((x[i][t - 1] for i, t in enumerate(T) if t != ROOT), Fraction(0))


def pair_rows(n: int, k: int) -> List[PairRow]:
    return [PairRow(i, p, q) for i in range(n) for p, q in itertools.combinations(range(1, k + 1), 2)]


def pair_value(x: FullVector, r: PairRow) -> Fraction:
    return x[r.i][r.p - 1] + x[r.i][r.q - 1]


def in_P_FT(f: ValuedFunction, x: FullVector) -> Optional[Violation]:
    _check(f, x)
    for T, val in zip(enumerate_labelings(f.k, f.n), f.values()):
        lhs = eval_full(x, T)
        if lhs > val:
            return Violation(T, lhs, val)
    return None


def in_P(f: ValuedFunction, x: FullVector) -> Optional[Violation]:
    """``None`` if ``x`` is in P(f); otherwise the first violated row
    (labeling rows in enumeration order, then pair rows)."""
    v = in_P_FT(f, x)
    if v is not None:
        return v
    for r in pair_rows(f.n, f.k):
        lhs = pair_value(x, r)
        if lhs > 0:
            return Violation(r, lhs, Fraction(0))
    return None


def _unified_leaf(row: Sequence[Fraction]) -> Optional[int]:
    if len(row) == 1:
        return 1 if row[0] <= 0 else None
    for l, a in enumerate(row, start=1):
        if a >= 0 and all(b == -a for m, b in enumerate(row, start=1) if m != l):
            return l
    return None


def is_unified(x: FullVector) -> bool:
    return all(_unified_leaf(row) is not None for row in x)


def embed_signed(v: SignedVector, k: int) -> FullVector:
    if any(t > k for t in v.L):
        raise ValueError(f"L={v.L} has leaves beyond k={k}")
    if k == 1:
        return tuple((-xi,) for xi in v.x)
    return tuple(tuple(xi if l == Li else -xi for l in range(1, k + 1)) for xi, Li in zip(v.x, v.L))


def project_unified(x: FullVector) -> SignedVector:
    xs, L = [], []
    for i, row in enumerate(x):
        l = _unified_leaf(row)
        if l is None:
            raise ValueError(f"row {i} = {row} is not unified")
        xs.append(abs(row[l - 1]))
        L.append(l)
    return SignedVector(tuple(xs), tuple(L))


def norm_1inf(x: FullVector) -> Fraction:
    return sum((max(abs(a) for a in row) for row in x), Fraction(0))


class ClosureError(ValueError):
    pass


def tight_full(f: ValuedFunction, x: FullVector) -> Tuple[List[Labeling], List[PairRow]]:
    """Tight labelings and tight pair rows of ``x``; checks the lattice structure.

    The tight labelings must be closed under meet and join and ``f`` must be
    k-modular on them; otherwise `ClosureError`.
    """
    _check(f, x)
    F = [T for T, val in zip(enumerate_labelings(f.k, f.n), f.values()) if eval_full(x, T) == val]
    G = [r for r in pair_rows(f.n, f.k) if pair_value(x, r) == 0]
    members = set(F)
    for a in F:
        for b in F:
            for c in (meet_vec(a, b), join_vec(a, b)):
                if c not in members:
                    raise ClosureError(f"tight labelings not closed: {a}, {b} give {c}")
    w = check_k_modular_on(f, F)
    if w is not None:
        raise ClosureError(f"f is not k-modular on the tight labelings: {w}")
    return F, G


@dataclass
class Basis:
    B1: Tuple[Labeling, ...] = ()
    B2: Tuple[PairRow, ...] = ()

    def __len__(self) -> int:
        return len(set(self.B1)) + len(set(self.B2))


def row_vector(row: Row, n: int, k: int) -> List[int]:
    vec = [0] * (n * k)
    if isinstance(row, PairRow):
        vec[row.i * k + row.p - 1] = 1
        vec[row.i * k + row.q - 1] = 1
    else:
        for i, t in enumerate(row):
            if t != ROOT:
                vec[i * k + t - 1] = 1
    return vec


def row_rhs(f: ValuedFunction, row: Row) -> Fraction:
    return Fraction(0) if isinstance(row, PairRow) else f(row)


def is_basis(f: ValuedFunction, x: FullVector, B: Basis) -> bool:
    """Whether ``B`` is a basis for ``x``: ``kn`` tight rows whose system has
    ``x`` as its unique solution."""
    _check(f, x)
    n, k = f.n, f.k
    B1, B2 = set(B.B1), set(B.B2)
    if len(B1) + len(B2) != n * k:
        return False
    if any(eval_full(x, T) != f(T) for T in B1):
        return False
    if any(pair_value(x, r) != 0 for r in B2):
        return False
    rows = sorted(B1) + sorted(B2)
    A = [row_vector(r, n, k) for r in rows]
    sol = solve(A, [row_rhs(f, r) for r in rows])
    if sol is None:
        return False
    return sol == [a for row in x for a in row]


def find_basis(f: ValuedFunction, x: FullVector, pairs_first: bool = False) -> Optional[Basis]:
    """Greedily pick ``kn`` independent tight rows, or ``None`` if ``x`` is not a vertex.

    Tight labelings are scanned in enumeration order before the tight pair
    rows (after them with ``pairs_first``).
    """
    F, G = tight_full(f, x)
    n, k = f.n, f.k
    ech = Echelon(n * k)
    B1, B2 = [], []
    candidates = (list(G) + list(F)) if pairs_first else (list(F) + list(G))
    for r in candidates:
        if ech.rank == n * k:
            break
        if ech.add(row_vector(r, n, k)):
            (B2 if isinstance(r, PairRow) else B1).append(r)
    if ech.rank < n * k:
        return None
    return Basis(tuple(B1), tuple(B2))


def exchange_candidates(S: Labeling, T: Labeling) -> List[Row]:
    out: List[Row] = [meet_vec(S, T), join_vec(S, T)]
    for i, (s, t) in enumerate(zip(S, T)):
        if s != ROOT and t != ROOT and s != t:
            out.append(PairRow(i, min(s, t), max(s, t)))
    return out


class ExchangeError(RuntimeError):
    pass


def exchange_step(f: ValuedFunction, x: FullVector, B: Basis, S: Labeling, T: Labeling) -> Basis:
    """Replace ``T`` in the basis by the first candidate among ``S meet T``,
    ``S join T`` and the pair rows where ``S`` and ``T`` hold distinct leaves
    that again yields a basis."""
    if S not in B.B1 or T not in B.B1:
        raise ValueError("S and T must both belong to B1")
    if not is_basis(f, x, B):
        raise ValueError("B is not a basis for x")
    for gamma in exchange_candidates(S, T):
        B1 = [U for U in B.B1 if U != T]
        B2 = list(B.B2)
        if isinstance(gamma, PairRow):
            if gamma not in B2:
                B2.append(gamma)
        elif gamma not in B1:
            B1.append(gamma)
        cand = Basis(tuple(B1), tuple(B2))
        if is_basis(f, x, cand):
            return cand
    raise ExchangeError(f"no exchange candidate for S={S}, T={T} gives a basis")


def _flat(n: int, k: int) -> List[Tuple[int, int]]:
    return [(i, l) for i in range(n) for l in range(1, k + 1)]


def polyhedron_lp(f: ValuedFunction, objective: Sequence, pair_constraints: bool = True) -> LinearProgram:
    """Minimize ``objective . x`` over P(f) (or P_FT(f) without pair rows); ``x`` is free."""
    n, k = f.n, f.k
    lp = LinearProgram(list(objective), lower=[None] * (n * k))
    for T, val in zip(enumerate_labelings(k, n), f.values()):
        if val < 0 or any(t != ROOT for t in T):
            lp.add_row(row_vector(T, n, k), "<=", val)
    if pair_constraints:
        for r in pair_rows(n, k):
            lp.add_row(row_vector(r, n, k), "<=", 0)
    return lp


class UnboundedPolyhedron(RuntimeError):
    pass


def vertex_by_lp(f: ValuedFunction, c: FullVector) -> FullVector:
    """Vertex of P(f) maximizing ``sum c * x`` for a strictly positive ``c``."""
    _check(f, c)
    if any(a <= 0 for row in c for a in row):
        raise ValueError("objective must be strictly positive")
    res = lp_min(polyhedron_lp(f, [-a for row in c for a in row]))
    if not res.optimal:
        raise UnboundedPolyhedron(f"LP over P(f) is {res.status}")
    k = f.k
    return tuple(tuple(res.x[i * k:(i + 1) * k]) for i in range(f.n))


def random_objective(n: int, k: int, rng: random.Random, top: int = 20) -> FullVector:
    return tuple(tuple(Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(k)) for _ in range(n))


def ft_lp(f: ValuedFunction) -> LinearProgram:
    """``min sum z`` over ``x`` in P_FT(f) with ``z[i] >= |x[i][l]|`` for all ``l``.

    Variables are the ``n*k`` entries of ``x`` (free) followed by ``z`` (>= 0).
    """
    n, k = f.n, f.k
    nk = n * k
    lp = LinearProgram([0] * nk + [1] * n, lower=[None] * nk + [0] * n)
    for T, val in zip(enumerate_labelings(k, n), f.values()):
        if val < 0 or any(t != ROOT for t in T):
            lp.add_row(row_vector(T, n, k) + [0] * n, "<=", val)
    for i, l in _flat(n, k):
        for s in (1, -1):
            row = [0] * (nk + n)
            row[i * k + l - 1] = s
            row[nk + i] = -1
            lp.add_row(row, "<=", 0)
    return lp


@dataclass
class FTReport:
    ok: bool
    ft_value: Optional[Fraction]
    min_value: Fraction
    dual_value: Optional[Fraction]
    ft_point: Optional[FullVector] = None
    notes: List[str] = field(default_factory=list)


def verify_ft(f: ValuedFunction) -> FTReport:
    """Check ``min f = max over P_FT(f) of -|x|_{1,inf}`` with one LP, against
    brute force and the signed dual, and spot-check the inclusions
    U(f) in P(f) in P_FT(f) at the dual optimum."""
    n, k = f.n, f.k
    pval, _ = brute_force_min(f)
    res = lp_min(ft_lp(f))
    notes = []
    ft_value = -res.value if res.optimal else None
    point = None
    if res.optimal:
        point = tuple(tuple(res.x[i * k:(i + 1) * k]) for i in range(n))
        if in_P_FT(f, point) is not None:
            notes.append("FT optimum is not in P_FT(f)")
        if norm_1inf(point) != res.value:
            notes.append("FT objective does not match the norm of its point")
    else:
        notes.append(f"FT LP is {res.status}")
    dual = max_dual(f)
    dval = None
    if dual is None:
        notes.append("U(f) is empty")
    else:
        dval, v = dual
        y = embed_signed(v, k)
        if in_P(f, y) is not None:
            notes.append("embedded dual optimum is not in P(f)")
        if in_P_FT(f, y) is not None:
            notes.append("embedded dual optimum is not in P_FT(f)")
        if norm_1inf(y) != v.norm:
            notes.append("norm of embedded dual optimum differs from |x|")
        if ft_value is not None and -norm_1inf(y) > ft_value:
            notes.append("embedded dual optimum beats the FT optimum")
    if ft_value != pval:
        notes.append(f"FT value {ft_value} != min f {pval}")
    if dval != pval:
        notes.append(f"dual value {dval} != min f {pval}")
    return FTReport(not notes, ft_value, pval, dval, point, notes)
