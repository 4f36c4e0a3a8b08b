"""The star domain: a root and ``k`` leaves, with its meet/join algebra.

A label is a plain ``int``: ``0`` is the root and ``1..k`` are the leaves.
A labeling is a tuple of labels, one per coordinate.  Coordinates are
0-indexed in code; leaves keep their 1-based names so that the text formats
read the same way as the mathematics.

Enumeration order is lexicographic with ``root < 1 < ... < k`` and the last
coordinate varying fastest, i.e. exactly ``itertools.product``.
"""

from __future__ import annotations

import contextlib
import itertools
from typing import Iterator, Sequence, Tuple

ROOT = 0

Label = int
Labeling = Tuple[int, ...]

DEFAULT_CAP = 1 << 24
_cap = DEFAULT_CAP


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration or search would exceed the configured cap."""


def get_cap() -> int:
    return _cap


def set_cap(cap: int) -> None:
    global _cap
    if cap < 1:
        raise ValueError("cap must be positive")
    _cap = int(cap)


@contextlib.contextmanager
def budget(cap: int):
    """Temporarily override the enumeration cap."""
    old = get_cap()
    set_cap(cap)
    try:
        yield
    finally:
        set_cap(old)


def check_size(k: int, n: int) -> int:
    """Return ``(k+1)**n``, raising `BudgetExceeded` above the cap."""
    if k < 1 or n < 1:
        raise ValueError(f"need k >= 1 and n >= 1, got k={k} n={n}")
    size = (k + 1) ** n
    if size > _cap:
        raise BudgetExceeded(f"(k+1)^n = {size} labelings exceeds cap {_cap}")
    return size


def is_leaf(t: Label) -> bool:
    return t != ROOT


def meet(s: Label, t: Label) -> Label:
    return s if s == t else ROOT


def join(s: Label, t: Label) -> Label:
    if s == t or t == ROOT:
        return s
    if s == ROOT:
        return t
    return ROOT


def below(s: Label, t: Label) -> bool:
    return s == ROOT or s == t


def _same_length(T: Sequence[int], U: Sequence[int]) -> None:
    if len(T) != len(U):
        raise ValueError(f"dimension mismatch: {len(T)} vs {len(U)}")


def meet_vec(T: Labeling, U: Labeling) -> Labeling:
    _same_length(T, U)
    return tuple(s if s == t else ROOT for s, t in zip(T, U))


def join_vec(T: Labeling, U: Labeling) -> Labeling:
    _same_length(T, U)
    return tuple(join(s, t) for s, t in zip(T, U))


def below_vec(T: Labeling, U: Labeling) -> bool:
    _same_length(T, U)
    return all(s == ROOT or s == t for s, t in zip(T, U))


def validate_labeling(T: Sequence[int], k: int, n: int) -> Labeling:
    T = tuple(T)
    if len(T) != n:
        raise ValueError(f"labeling {T} has length {len(T)}, expected {n}")
    for t in T:
        if not 0 <= t <= k:
            raise ValueError(f"label {t} out of range 0..{k}")
    return T


def enumerate_labelings(k: int, n: int) -> Iterator[Labeling]:
    """Yield all ``(k+1)**n`` labelings in the documented order."""
    check_size(k, n)
    return itertools.product(range(k + 1), repeat=n)


def enumerate_below(K: Labeling) -> Iterator[Labeling]:
    """Yield every ``T <= K`` for an all-leaf ``K`` (``2**n`` of them)."""
    if any(t == ROOT for t in K):
        raise ValueError(f"K={K} must consist of leaves only")
    if 2 ** len(K) > _cap:
        raise BudgetExceeded(f"2^{len(K)} labelings exceeds cap {_cap}")
    return itertools.product(*[(ROOT, t) for t in K])


def leaf_vectors(k: int, n: int) -> Iterator[Labeling]:
    """All-leaf labelings in enumeration order (``k**n`` of them)."""
    if k ** n > _cap:
        raise BudgetExceeded(f"k^n = {k ** n} exceeds cap {_cap}")
    return itertools.product(range(1, k + 1), repeat=n)


def index_of(T: Labeling, k: int) -> int:
    """Position of ``T`` in the enumeration order."""
    idx = 0
    for t in T:
        idx = idx * (k + 1) + t
    return idx


def support(T: Labeling) -> Tuple[int, ...]:
    return tuple(i for i, t in enumerate(T) if t != ROOT)


def delta(n: int, i: int, leaf: Label) -> Labeling:
    """The labeling with ``leaf`` at coordinate ``i`` and the root elsewhere."""
    T = [ROOT] * n
    T[i] = leaf
    return tuple(T)


def compatible(T: Labeling, U: Labeling) -> bool:
    _same_length(T, U)
    return all(s == ROOT or t == ROOT or s == t for s, t in zip(T, U))


def i_similar(T: Labeling, U: Labeling, i: int) -> bool:
    _same_length(T, U)
    return all(s == t for j, (s, t) in enumerate(zip(T, U)) if j != i)


def distinct_leaves_at(T: Labeling, U: Labeling, i: int) -> bool:
    return T[i] != ROOT and U[i] != ROOT and T[i] != U[i]


def format_labeling(T: Labeling) -> str:
    return " ".join(str(t) for t in T)
