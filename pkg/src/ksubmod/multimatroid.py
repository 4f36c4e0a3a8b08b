"""Rank functions of k-matroids and their link to k-submodularity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .domain import ROOT, Labeling, compatible, enumerate_labelings, join_vec, meet_vec, support
from .functions import ValuedFunction, ViolationWitness, check_k_submodular, check_pairwise


@dataclass(frozen=True)
class AxiomFailure:
    axiom: int
    T: Labeling
    U: Labeling

    def __str__(self) -> str:
        return f"axiom {self.axiom} fails for T={self.T} U={self.U}"


def check_integral(r: ValuedFunction) -> None:
    bad = [v for v in r.values() if v.denominator != 1]
    if bad:
        raise ValueError(f"rank function has non-integer value {bad[0]}")


def check_rank_axioms(r: ValuedFunction) -> Optional[AxiomFailure]:
    """Check the four rank axioms in order; the first failure wins.

    1. ``r(0) = 0``.
    2. Setting a root coordinate to a leaf raises ``r`` by 0 or 1.
    3. The submodular inequality on compatible pairs.
    4. ``r(T meet U) + r(T join U) <= r(T) + r(U) - 1`` when ``T`` and ``U``
       differ only at one coordinate, where they hold distinct leaves.
    """
    check_integral(r)
    k, n = r.k, r.n
    zero = (ROOT,) * n
    if r(zero) != 0:
        return AxiomFailure(1, zero, zero)
    labelings = list(enumerate_labelings(k, n))
    for T in labelings:
        for i in range(n):
            if T[i] != ROOT:
                continue
            for leaf in range(1, k + 1):
                U = T[:i] + (leaf,) + T[i + 1:]
                if not r(T) <= r(U) <= r(T) + 1:
                    return AxiomFailure(2, T, U)
    for T in labelings:
        for U in labelings:
            if compatible(T, U) and r(meet_vec(T, U)) + r(join_vec(T, U)) > r(T) + r(U):
                return AxiomFailure(3, T, U)
    for T in labelings:
        for i in range(n):
            if T[i] == ROOT:
                continue
            for leaf in range(1, k + 1):
                if leaf == T[i]:
                    continue
                U = T[:i] + (leaf,) + T[i + 1:]
                if r(meet_vec(T, U)) + r(join_vec(T, U)) > r(T) + r(U) - 1:
                    return AxiomFailure(4, T, U)
    return None


@dataclass
class RankReport:
    axioms: Optional[AxiomFailure]
    pairwise: Optional[ViolationWitness]
    submodular: Optional[ViolationWitness]

    @property
    def is_rank(self) -> bool:
        return self.axioms is None

    @property
    def consistent(self) -> bool:
        """Axioms imply submodularity, and both submodularity checks agree."""
        if (self.pairwise is None) != (self.submodular is None):
            return False
        return not self.is_rank or self.submodular is None


def rank_is_k_submodular(r: ValuedFunction) -> RankReport:
    return RankReport(check_rank_axioms(r), check_pairwise(r), check_k_submodular(r))


def gen_free_rank(k: int, n: int, cap: Optional[int] = None) -> ValuedFunction:
    """``r(T) = min(|supp T|, cap)``; ``cap=None`` means no cap."""
    if cap is not None and cap < 1:
        raise ValueError("cap must be a positive integer")

    def rank(T: Labeling) -> int:
        s = len(support(T))
        return s if cap is None else min(s, cap)

    return ValuedFunction.from_callable(k, n, rank)
