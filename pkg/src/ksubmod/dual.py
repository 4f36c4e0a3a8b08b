"""Signed dual vectors ``(x, L)`` and the machinery around them.

A signed vector pairs nonnegative magnitudes ``x`` with a "positive" leaf
``L[i]`` per coordinate.  It evaluates a labeling coordinatewise: 0 at the
root, ``+x[i]`` at ``L[i]`` and ``-x[i]`` at every other leaf.  For ``k = 1``
the single leaf evaluates to ``-x[i]``, which turns the min-max relation into
Edmonds' theorem for set functions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .domain import (
    ROOT,
    Labeling,
    enumerate_below,
    enumerate_labelings,
    join_vec,
    meet_vec,
)
from .functions import ValuedFunction, check_k_modular_on


class NotInU(ValueError):
    """The signed vector violates ``(x,L)(T) <= f(T)`` at ``labeling``."""

    def __init__(self, labeling: Labeling):
        super().__init__(f"signed vector exceeds f at {labeling}")
        self.labeling = labeling


class TightnessError(ValueError):
    """Tight labelings are not closed, or a support coordinate shows two
    different negative leaves.  Either means ``f`` is not k-submodular or the
    vector is not feasible."""


class ExtractionError(ValueError):
    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class SignedVector:
    x: Tuple[Fraction, ...]
    L: Tuple[int, ...]

    def __post_init__(self):
        x = tuple(Fraction(v) for v in self.x)
        L = tuple(int(t) for t in self.L)
        if len(x) != len(L):
            raise ValueError(f"x has length {len(x)} but L has length {len(L)}")
        if any(v < 0 for v in x):
            raise ValueError(f"x must be nonnegative, got {x}")
        if any(t < 1 for t in L):
            raise ValueError(f"L must consist of leaves, got {L}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "L", L)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def norm(self) -> Fraction:
        return sum(self.x, Fraction(0))

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.x) if v > 0)

    def with_x(self, x: Sequence) -> "SignedVector":
        return SignedVector(tuple(x), self.L)


def unit(n: int, i: int) -> Tuple[Fraction, ...]:
    """Characteristic vector of coordinate ``i``."""
    return tuple(Fraction(int(j == i)) for j in range(n))


def sign(k: int, positive: int, t: int) -> int:
    """Coefficient of ``x[i]`` in the evaluation at label ``t``."""
    if t == ROOT:
        return 0
    if t == positive and k >= 2:
        return 1
    return -1


def is_negative(k: int, positive: int, t: int) -> bool:
    return sign(k, positive, t) < 0


def _check(f: ValuedFunction, v: SignedVector) -> None:
    if v.n != f.n:
        raise ValueError(f"signed vector of length {v.n} for n={f.n}")
    if any(t > f.k for t in v.L):
        raise ValueError(f"L={v.L} has leaves beyond k={f.k}")


def eval_signed(v: SignedVector, T: Labeling, k: Optional[int] = None) -> Fraction:
    """Evaluate ``(x, L)`` at ``T``.

    ``k`` only matters for ``k = 1``, where the single leaf is negative; left
    as ``None`` the ``k >= 2`` rule applies.
    """
    single = k == 1
    if len(T) != v.n:
        raise ValueError(f"labeling of length {len(T)} for n={v.n}")
    total = Fraction(0)
    for xi, Li, t in zip(v.x, v.L, T):
        if t != ROOT:
            total += xi if (t == Li and not single) else -xi
    return total


def dual_objective(v: SignedVector) -> Fraction:
    return -v.norm


def signed_function(v: SignedVector, k: int) -> ValuedFunction:
    return ValuedFunction.from_callable(k, v.n, lambda T: eval_signed(v, T, k))


def _first_violation(f: ValuedFunction, v: SignedVector, labelings) -> Optional[Labeling]:
    k = f.k
    for T in labelings:
        if eval_signed(v, T, k) > f(T):
            return T
    return None


def in_U(f: ValuedFunction, v: SignedVector) -> Optional[Labeling]:
    """``None`` if ``(x,L)`` is dominated by ``f`` everywhere, else the first violation."""
    _check(f, v)
    vals = f.values()
    k = f.k
    for idx, T in enumerate(enumerate_labelings(k, f.n)):
        if eval_signed(v, T, k) > vals[idx]:
            return T
    return None


def in_U_K(f: ValuedFunction, v: SignedVector, K: Labeling) -> Optional[Labeling]:
    _check(f, v)
    return _first_violation(f, v, enumerate_below(K))


def in_B_K(f: ValuedFunction, v: SignedVector, K: Labeling) -> Optional[str]:
    """``None`` if ``v`` lies in the base set below ``K``, else a reason."""
    T = in_U_K(f, v, K)
    if T is not None:
        return f"violated at {T}: {eval_signed(v, T, f.k)} > {f(T)}"
    lhs, rhs = eval_signed(v, K, f.k), f(K)
    if lhs != rhs:
        return f"not tight at K={K}: {lhs} != {rhs}"
    return None


def greedy_base(f: ValuedFunction, K: Labeling, order: Optional[Sequence[int]] = None) -> SignedVector:
    """Signed vector from the greedy vertex of the set function ``S -> f(K on S)``.

    With ``y`` the greedy vertex in the given order (identity by default),
    ``x = |y|`` and ``L[i]`` is ``K[i]`` unless ``y[i] < 0``, in which case it
    is the smallest leaf other than ``K[i]``.  For ``k >= 2`` the result lies
    in the base set below ``K``.

    For ``k = 1`` there is no second leaf, so positive parts of ``y`` are
    dropped (``x = max(0, -y)``); the result is still in U(f) but is tight at
    ``K`` only when ``y <= 0``.
    """
    n, k = f.n, f.k
    if len(K) != n or any(t == ROOT or t > k for t in K):
        raise ValueError(f"K={K} must be an all-leaf labeling of length {n}")
    if order is None:
        order = range(n)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of 0..{n - 1}")
    y = [Fraction(0)] * n
    current = [ROOT] * n
    prev = f(tuple(current))
    for i in order:
        current[i] = K[i]
        val = f(tuple(current))
        y[i] = val - prev
        prev = val
    x, L = [], []
    for i, yi in enumerate(y):
        if k == 1:
            x.append(max(Fraction(0), -yi))
            L.append(1)
        elif yi < 0:
            x.append(-yi)
            L.append(1 if K[i] != 1 else 2)
        else:
            x.append(yi)
            L.append(K[i])
    return SignedVector(tuple(x), tuple(L))


@dataclass
class TightFamily:
    """Tight labelings of a feasible ``(x, L)`` plus their negative leaves.

    ``negative_leaf`` maps each support coordinate that some tight labeling
    labels negatively to that (unique) leaf; its keys form ``S(x, L)``.
    """

    members: Tuple[Labeling, ...]
    negative_leaf: Dict[int, int] = field(default_factory=dict)
    support: Tuple[int, ...] = ()

    @property
    def S(self) -> Tuple[int, ...]:
        return tuple(sorted(self.negative_leaf))

    def n_element(self, i: int) -> Labeling:
        """Meet of all tight labelings carrying the negative leaf at ``i``."""
        if i not in self.negative_leaf:
            raise ValueError(f"coordinate {i} is not in S(x, L) = {self.S}")
        leaf = self.negative_leaf[i]
        carriers = [T for T in self.members if T[i] == leaf]
        return functools.reduce(meet_vec, carriers)


def tight_labelings(f: ValuedFunction, v: SignedVector) -> Tuple[Labeling, ...]:
    vals = f.values()
    k = f.k
    return tuple(T for idx, T in enumerate(enumerate_labelings(k, f.n)) if eval_signed(v, T, k) == vals[idx])


def tight_family(f: ValuedFunction, v: SignedVector) -> TightFamily:
    _check(f, v)
    T = in_U(f, v)
    if T is not None:
        raise NotInU(T)
    members = tight_labelings(f, v)
    member_set = set(members)
    for a in members:
        for b in members:
            for c in (meet_vec(a, b), join_vec(a, b)):
                if c not in member_set:
                    raise TightnessError(f"tight set not closed: {a}, {b} give {c}")
    w = check_k_modular_on(f, members)
    if w is not None:
        raise TightnessError(f"f is not k-modular on tight labelings: {w}")
    supp = v.support()
    negative: Dict[int, int] = {}
    for i in supp:
        leaves = {T[i] for T in members if is_negative(f.k, v.L[i], T[i])}
        if len(leaves) > 1:
            raise TightnessError(f"coordinate {i} carries negative leaves {sorted(leaves)}")
        if leaves:
            negative[i] = leaves.pop()
    return TightFamily(members, negative, supp)


def n_element(f: ValuedFunction, v: SignedVector, i: int) -> Labeling:
    return tight_family(f, v).n_element(i)


def probe_decrement(f: ValuedFunction, v: SignedVector, i: int, alpha) -> Optional[Labeling]:
    """Membership of ``(x - alpha e_i, L)`` in U(f): ``None`` or the first violation."""
    return probe_decrement2(f, v, i, None, alpha)


def probe_decrement2(f: ValuedFunction, v: SignedVector, i: int, j: Optional[int], alpha) -> Optional[Labeling]:
    """Membership of ``(x - alpha (e_i + e_j), L)`` in U(f)."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x = list(v.x)
    for c in (i,) if j is None else (i, j):
        x[c] -= alpha
        if x[c] < 0:
            raise ValueError(f"alpha={alpha} exceeds x[{c}]={v.x[c]}")
    return in_U(f, v.with_x(x))


def extract_minimizer(f: ValuedFunction, v: SignedVector) -> Labeling:
    """Join of the N-elements of an optimal ``(x, L)``; ``f`` there equals ``-|x|``.

    Raises `ExtractionError` when ``v`` is not the kind of optimum the
    construction needs: a support coordinate with no negatively labelled tight
    element, or two N-elements with distinct leaves in one coordinate.
    """
    fam = tight_family(f, v)
    n = f.n
    missing = [i for i in fam.support if i not in fam.negative_leaf]
    if missing:
        raise ExtractionError(f"support coordinates {missing} are not in S(x, L)", pair=(missing[0], None))
    N = {i: fam.n_element(i) for i in fam.support}
    idx = list(N)
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            for m in range(n):
                s, t = N[i][m], N[j][m]
                if s != ROOT and t != ROOT and s != t:
                    raise ExtractionError(
                        f"N-elements for coordinates {i} and {j} disagree at coordinate {m}", pair=(i, j)
                    )
    T = functools.reduce(join_vec, N.values(), (ROOT,) * n)
    if f(T) != -v.norm:
        raise ExtractionError(f"extracted {T} has value {f(T)}, expected {-v.norm}")
    return T
