"""Exact-rational functions on the star domain and their verifiers.

A `ValuedFunction` is either a dense table over all labelings or a sum of
local terms (the VCSP-style representation).  Values are always
`fractions.Fraction`.
"""

from __future__ import annotations

import functools
import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .domain import (
    ROOT,
    Labeling,
    check_size,
    compatible,
    enumerate_labelings,
    format_labeling,
    index_of,
    join_vec,
    meet_vec,
)

log = logging.getLogger(__name__)

Number = Union[int, Fraction, str]


class Term(NamedTuple):
    """A local cost function on the coordinates in ``scope``.

    ``table`` lists values over all labelings of ``len(scope)`` coordinates in
    the standard enumeration order.  An empty scope is a constant.
    """

    scope: Tuple[int, ...]
    table: Tuple[Fraction, ...]


class ValuedFunction:
    """A function ``f`` from labelings of length ``n`` over ``k`` leaves to Q.

    Instances are immutable.  ``offset`` records what `normalize` subtracted,
    so the original function is ``f + offset``.
    """

    __slots__ = ("k", "n", "_table", "terms", "offset", "_dense")

    def __init__(self, k: int, n: int, table=None, terms=None, offset: Number = 0):
        check_size(k, n)
        if (table is None) == (terms is None):
            raise ValueError("give exactly one of table or terms")
        self.k = k
        self.n = n
        self.offset = Fraction(offset)
        self.terms: Optional[Tuple[Term, ...]] = None
        self._table: Optional[Tuple[Fraction, ...]] = None
        self._dense: Optional[Tuple[Fraction, ...]] = None
        if table is not None:
            table = tuple(Fraction(v) for v in table)
            if len(table) != (k + 1) ** n:
                raise ValueError(f"table has {len(table)} entries, expected {(k + 1) ** n}")
            self._table = table
        else:
            self.terms = tuple(_check_term(t, k, n) for t in terms)

    @classmethod
    def from_table(cls, k: int, n: int, values: Union[Sequence[Number], Mapping[Labeling, Number]]):
        """Build a dense function from values in enumeration order or a mapping."""
        if isinstance(values, Mapping):
            table = []
            for T in enumerate_labelings(k, n):
                if T not in values:
                    raise ValueError(f"missing labeling {T}")
                table.append(values[T])
            return cls(k, n, table=table)
        return cls(k, n, table=values)

    @classmethod
    def from_callable(cls, k: int, n: int, fn: Callable[[Labeling], Number]):
        return cls(k, n, table=[fn(T) for T in enumerate_labelings(k, n)])

    @classmethod
    def from_terms(cls, k: int, n: int, terms: Iterable):
        return cls(k, n, terms=[Term(tuple(s), tuple(Fraction(v) for v in tab)) for s, tab in terms])

    @property
    def is_dense(self) -> bool:
        return self._table is not None

    def values(self) -> Tuple[Fraction, ...]:
        """All values in enumeration order."""
        if self._table is not None:
            return self._table
        if self._dense is None:
            self._dense = tuple(self(T) for T in enumerate_labelings(self.k, self.n))
        return self._dense

    def __call__(self, T: Labeling) -> Fraction:
        if len(T) != self.n:
            raise ValueError(f"labeling of length {len(T)} for n={self.n}")
        k = self.k
        if self._table is not None:
            for t in T:
                if not 0 <= t <= k:
                    raise ValueError(f"label {t} out of range 0..{k}")
            return self._table[index_of(T, k)]
        total = Fraction(0)
        for scope, table in self.terms:
            idx = 0
            for i in scope:
                t = T[i]
                if not 0 <= t <= k:
                    raise ValueError(f"label {t} out of range 0..{k}")
                idx = idx * (k + 1) + t
            total += table[idx]
        return total

    def dense(self) -> "ValuedFunction":
        if self.is_dense:
            return self
        return ValuedFunction(self.k, self.n, table=self.values(), offset=self.offset)

    def __add__(self, other: "ValuedFunction") -> "ValuedFunction":
        if (self.k, self.n) != (other.k, other.n):
            raise ValueError("dimension mismatch")
        if not self.is_dense and not other.is_dense:
            return ValuedFunction(self.k, self.n, terms=self.terms + other.terms)
        return ValuedFunction(self.k, self.n, table=[a + b for a, b in zip(self.values(), other.values())])

    def __repr__(self) -> str:
        kind = "table" if self.is_dense else f"{len(self.terms)} terms"
        return f"ValuedFunction(k={self.k}, n={self.n}, {kind})"


def _check_term(term, k: int, n: int) -> Term:
    scope, table = term
    scope = tuple(scope)
    if len(set(scope)) != len(scope):
        raise ValueError(f"scope {scope} repeats a coordinate")
    for i in scope:
        if not 0 <= i < n:
            raise ValueError(f"scope index {i} out of range for n={n}")
    table = tuple(Fraction(v) for v in table)
    if len(table) != (k + 1) ** len(scope):
        raise ValueError(f"term on {scope} has {len(table)} entries, expected {(k + 1) ** len(scope)}")
    return Term(scope, table)


def evaluate(f: ValuedFunction, T: Labeling) -> Fraction:
    return f(T)


def normalize(f: ValuedFunction) -> ValuedFunction:
    """Shift ``f`` so that ``f(0) = 0``; the shift is kept in ``offset``."""
    f0 = f((ROOT,) * f.n)
    if f0 == 0:
        return f
    if f.is_dense:
        return ValuedFunction(f.k, f.n, table=[v - f0 for v in f.values()], offset=f.offset + f0)
    return ValuedFunction(f.k, f.n, terms=f.terms + (Term((), (-f0,)),), offset=f.offset + f0)


def zero(k: int, n: int) -> ValuedFunction:
    return ValuedFunction(k, n, terms=())


# -- pair scans -------------------------------------------------------------

_PAIR_CACHE_LIMIT = 1 << 18


@functools.lru_cache(maxsize=32)
def _pair_table(k: int, n: int):
    return tuple(_iter_pairs(k, n))


def _iter_pairs(k: int, n: int) -> Iterator[Tuple[int, int, int, int]]:
    labelings = list(enumerate_labelings(k, n))
    for a, T in enumerate(labelings):
        for b, U in enumerate(labelings):
            yield a, b, index_of(meet_vec(T, U), k), index_of(join_vec(T, U), k)


def pairs(k: int, n: int) -> Iterable[Tuple[int, int, int, int]]:
    """All ordered pairs as ``(iT, iU, i_meet, i_join)`` index tuples."""
    if (k + 1) ** (2 * n) <= _PAIR_CACHE_LIMIT:
        return _pair_table(k, n)
    return _iter_pairs(k, n)


@dataclass(frozen=True)
class ViolationWitness:
    """``lhs = f(T meet U) + f(T join U)`` against ``rhs = f(T) + f(U)``."""

    T: Labeling
    U: Labeling
    lhs: Fraction
    rhs: Fraction

    def __str__(self) -> str:
        return f"T=({format_labeling(self.T)}) U=({format_labeling(self.U)}) lhs={self.lhs} rhs={self.rhs}"


def _scan(f: ValuedFunction, bad: Callable[[Fraction, Fraction], bool], pair_filter=None) -> Optional[ViolationWitness]:
    k, n = f.k, f.n
    vals = _plain(f.values())
    labelings = None
    for a, b, m, j in pairs(k, n):
        lhs = vals[m] + vals[j]
        rhs = vals[a] + vals[b]
        if bad(lhs, rhs):
            if labelings is None:
                labelings = list(enumerate_labelings(k, n))
            T, U = labelings[a], labelings[b]
            if pair_filter is not None and not pair_filter(T, U):
                continue
            return ViolationWitness(T, U, Fraction(lhs), Fraction(rhs))
    return None


def _plain(vals: Sequence[Fraction]) -> Sequence:
    # int arithmetic is several times faster than Fraction for integer tables
    if all(v.denominator == 1 for v in vals):
        return [v.numerator for v in vals]
    return vals


def check_k_submodular(f: ValuedFunction) -> Optional[ViolationWitness]:
    """Return ``None`` if ``f`` is k-submodular, else the first violating pair."""
    return _scan(f, lambda lhs, rhs: lhs > rhs)


def check_k_supermodular(f: ValuedFunction) -> Optional[ViolationWitness]:
    return _scan(f, lambda lhs, rhs: lhs < rhs)


def check_k_modular(f: ValuedFunction) -> Optional[ViolationWitness]:
    return _scan(f, lambda lhs, rhs: lhs != rhs)


def check_k_modular_on(f: ValuedFunction, members: Sequence[Labeling]) -> Optional[ViolationWitness]:
    """Modular equality over pairs drawn from ``members`` (meets and joins are
    evaluated wherever they land)."""
    for T in members:
        for U in members:
            lhs = f(meet_vec(T, U)) + f(join_vec(T, U))
            rhs = f(T) + f(U)
            if lhs != rhs:
                return ViolationWitness(T, U, lhs, rhs)
    return None


def is_pairwise_pair(T: Labeling, U: Labeling) -> bool:
    """Compatible, or equal except at one coordinate holding two distinct leaves."""
    if compatible(T, U):
        return True
    diff = [i for i, (s, t) in enumerate(zip(T, U)) if s != t]
    return len(diff) == 1 and T[diff[0]] != ROOT and U[diff[0]] != ROOT


def check_pairwise(f: ValuedFunction) -> Optional[ViolationWitness]:
    """The submodular inequality restricted to compatible pairs and to pairs
    that differ in a single coordinate where both carry (distinct) leaves.

    For every ``f`` this agrees with `check_k_submodular` on the verdict,
    though the witness may differ.
    """
    return _scan(f, lambda lhs, rhs: lhs > rhs, pair_filter=is_pairwise_pair)


def brute_force_min(f: ValuedFunction) -> Tuple[Fraction, Labeling]:
    """Exact minimum and the first minimizer in enumeration order."""
    vals = f.values()
    best = min(range(len(vals)), key=vals.__getitem__)
    T = next(itertools.islice(enumerate_labelings(f.k, f.n), best, None))
    return vals[best], T


def restrict_fix(f: ValuedFunction, i: int, t: int) -> ValuedFunction:
    """Pin coordinate ``i`` to label ``t``; the result has ``n - 1`` coordinates."""
    k, n = f.k, f.n
    if not 0 <= i < n:
        raise IndexError(f"coordinate {i} out of range for n={n}")
    if n == 1:
        raise ValueError("cannot fix the only coordinate")
    if not 0 <= t <= k:
        raise ValueError(f"label {t} out of range 0..{k}")

    if f.is_dense:
        return ValuedFunction.from_callable(
            k, n - 1, lambda T: f(T[:i] + (t,) + T[i:])
        )
    terms = []
    for scope, table in f.terms:
        if i not in scope:
            terms.append(Term(tuple(j if j < i else j - 1 for j in scope), table))
            continue
        pos = scope.index(i)
        new_scope = tuple(j if j < i else j - 1 for j in scope if j != i)
        new_table = []
        for local in itertools.product(range(k + 1), repeat=len(new_scope)):
            full = local[:pos] + (t,) + local[pos:]
            new_table.append(table[index_of(full, k)])
        terms.append(Term(new_scope, tuple(new_table)))
    return ValuedFunction(k, n - 1, terms=terms)


# -- generators -------------------------------------------------------------


def unary_term(k: int, rng: random.Random, lo: int, hi: int) -> Tuple[Fraction, ...]:
    """A random k-submodular unary table: root 0, pairwise leaf sums >= 0."""
    g = [rng.randint(lo, hi) for _ in range(k)]
    if k >= 2:
        a = min(range(k), key=g.__getitem__)
        g = [v if b == a else max(v, -g[a]) for b, v in enumerate(g)]
    return tuple(Fraction(v) for v in [0] + g)


def gen_unary(k: int, n: int, seed: int, lo: int = -5, hi: int = 5) -> ValuedFunction:
    """Sum of random unary k-submodular terms (always k-submodular, normalized)."""
    rng = random.Random(seed)
    return ValuedFunction(k, n, terms=[Term((i,), unary_term(k, rng, lo, hi)) for i in range(n)])


class RetryLimitExceeded(RuntimeError):
    pass


def random_table(k: int, n: int, lo: int, hi: int, rng: random.Random) -> ValuedFunction:
    """Uniform integer table on ``[lo, hi]`` with ``f(0) = 0``."""
    size = check_size(k, n)
    return ValuedFunction(k, n, table=[0] + [rng.randint(lo, hi) for _ in range(size - 1)])


def _accepts(k: int, n: int, table: Sequence[int]) -> bool:
    for a, b, m, j in pairs(k, n):
        if table[m] + table[j] > table[a] + table[b]:
            return False
    return True


def _draw_until_submodular(k: int, n: int, lo: int, hi: int, rng: random.Random, max_tries: int):
    size = check_size(k, n)
    for attempt in range(1, max_tries + 1):
        table = [0] + [rng.randint(lo, hi) for _ in range(size - 1)]
        if _accepts(k, n, table):
            return ValuedFunction(k, n, table=table), attempt
    return None, max_tries


def gen_rejection(
    k: int, n: int, lo: int = -3, hi: int = 3, seed: int = 0, max_tries: int = 10000
) -> ValuedFunction:
    """Draw random normalized integer tables until one is k-submodular."""
    rng = random.Random(seed)
    f, attempts = _draw_until_submodular(k, n, lo, hi, rng, max_tries)
    if f is not None:
        log.info("gen_rejection k=%d n=%d: accepted after %d draws (rate %.4g)", k, n, attempts, 1 / attempts)
        return f
    raise RetryLimitExceeded(f"no k-submodular table in {max_tries} draws (k={k} n={n} range [{lo},{hi}])")


def _leaf_pattern(T: Labeling) -> Tuple[int, ...]:
    """Relabel leaves by order of first appearance: (3, 0, 1, 3) -> (1, 0, 2, 1)."""
    seen = {}
    return tuple(0 if t == ROOT else seen.setdefault(t, len(seen) + 1) for t in T)


def _draw_symmetric(k: int, arity: int, hi: int, rng: random.Random, max_tries: int):
    """Rejection over tables that only see the pattern of equal leaves.

    The number of patterns does not grow with ``k``, so acceptance stays
    reasonable where full tables almost never pass.
    """
    labelings = list(enumerate_labelings(k, arity))
    patterns = sorted({_leaf_pattern(T) for T in labelings})
    for _ in range(max_tries):
        value = {p: (0 if not any(p) else rng.randint(0, hi)) for p in patterns}
        table = [value[_leaf_pattern(T)] for T in labelings]
        if _accepts(k, arity, table):
            return ValuedFunction(k, arity, table=table)
    return None


FULL_TABLE_LIMIT = 16


def gen_local(
    k: int, n: int, seed: int, arity: int = 2, n_terms: Optional[int] = None, lo: int = -3, hi: int = 3,
    max_weight: int = 3, max_tries: int = 10000,
) -> ValuedFunction:
    """Sum of random unary terms and random k-submodular local terms.

    Local tables are drawn by rejection and scaled by a random weight in
    ``1..max_weight``.  Small tables (at most 16 entries) are drawn over
    {0, 1}; larger ones over {0, 1, 2} but depending only on which
    positions hold equal leaves.  Unary terms take values in ``[lo, hi]``.
    Sums of k-submodular terms stay k-submodular.
    """
    rng = random.Random(seed)
    arity = min(arity, n)
    if n_terms is None:
        n_terms = n
    terms = [Term((i,), unary_term(k, rng, lo, hi)) for i in range(n)]
    for _ in range(n_terms):
        scope = tuple(sorted(rng.sample(range(n), arity)))
        if (k + 1) ** arity <= FULL_TABLE_LIMIT:
            local, _ = _draw_until_submodular(k, arity, 0, 1, rng, max_tries)
        else:
            local = _draw_symmetric(k, arity, 2, rng, max_tries)
        if local is None:
            raise RetryLimitExceeded(f"no local k-submodular table of arity {arity}")
        w = rng.randint(1, max_weight)
        terms.append(Term(scope, tuple(w * v for v in local.values())))
    return ValuedFunction(k, n, terms=terms)
