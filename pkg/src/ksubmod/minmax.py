"""Dual maximization over U(f) and end-to-end min-max certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .domain import ROOT, BudgetExceeded, Labeling, delta, enumerate_labelings, get_cap, leaf_vectors
from .dual import (
    ExtractionError,
    NotInU,
    SignedVector,
    TightnessError,
    extract_minimizer,
    in_U,
    sign,
    tight_labelings,
)
from .functions import ValuedFunction, brute_force_min
from .lp import LinearProgram, lp_min


def dual_rows(f: ValuedFunction, L: Labeling) -> Dict[Tuple[int, ...], Fraction]:
    """Constraint rows of U(f) for a fixed ``L``: sign pattern -> tightest bound.

    Every labeling contributes ``sum_i pattern[i] * x[i] <= f(T)``; labelings
    sharing a sign pattern collapse to the smallest right-hand side.
    """
    k = f.k
    rows: Dict[Tuple[int, ...], Fraction] = {}
    for T, val in zip(enumerate_labelings(k, f.n), f.values()):
        pattern = tuple(sign(k, Li, t) for Li, t in zip(L, T))
        old = rows.get(pattern)
        if old is None or val < old:
            rows[pattern] = val
    return rows


def dual_lp(f: ValuedFunction, L: Labeling) -> LinearProgram:
    """``min sum(x)`` over ``x >= 0`` with ``(x, L)`` dominated by ``f``."""
    lp = LinearProgram([1] * f.n)
    for pattern, rhs in dual_rows(f, L).items():
        lp.add_row(list(pattern), "<=", rhs)
    return lp


def max_dual_fixed_L(f: ValuedFunction, L: Labeling) -> Optional[Tuple[Fraction, Tuple[Fraction, ...]]]:
    """Best ``-|x|`` with ``L`` held fixed, or ``None`` if no ``x`` is feasible."""
    if len(L) != f.n or any(t < 1 or t > f.k for t in L):
        raise ValueError(f"L={L} must be an all-leaf labeling of length {f.n}")
    res = lp_min(dual_lp(f, L))
    if not res.optimal:
        return None
    return -res.value, res.x


def max_dual(f: ValuedFunction) -> Optional[Tuple[Fraction, SignedVector]]:
    """Maximize ``-|x|`` over U(f) by solving one LP per choice of ``L``.

    Ties go to the first ``L`` in enumeration order.  Returns ``None`` when
    U(f) is empty, which cannot happen for normalized k-submodular ``f``.
    """
    best = None
    for L in leaf_vectors(f.k, f.n):
        res = max_dual_fixed_L(f, L)
        if res is not None and (best is None or res[0] > best[0]):
            best = (res[0], SignedVector(res[1], L))
    return best


def integer_box(f: ValuedFunction, L: Labeling) -> Tuple[List[int], List[Optional[int]]]:
    """Per-coordinate integer bounds on ``x`` from the singleton rows.

    The upper bound is ``None`` for ``k = 1``, where no row bounds ``x`` above.
    """
    k, n = f.k, f.n
    lo, hi = [], []
    for i in range(n):
        low = Fraction(0)
        up = None
        for leaf in range(1, k + 1):
            s = sign(k, L[i], leaf)
            val = f(delta(n, i, leaf))
            if s > 0:
                up = val
            else:
                low = max(low, -val)
        lo.append(_ceil(low))
        hi.append(None if up is None else _floor(up))
    return lo, hi


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _compositions(total: int, lo: List[int], hi: List[Optional[int]]) -> Iterator[Tuple[int, ...]]:
    """Integer vectors within the box summing to ``total``, lexicographically."""
    n = len(lo)
    if n == 0:
        if total == 0:
            yield ()
        return
    rest_lo = sum(lo[1:])
    rest_hi = None if any(h is None for h in hi[1:]) else sum(hi[1:])
    start = max(lo[0], total - rest_hi) if rest_hi is not None else lo[0]
    stop = total - rest_lo
    if hi[0] is not None:
        stop = min(stop, hi[0])
    for v in range(start, stop + 1):
        for tail in _compositions(total - v, lo[1:], hi[1:]):
            yield (v,) + tail


def max_dual_integer(f: ValuedFunction, budget: Optional[int] = None) -> Optional[Tuple[Fraction, SignedVector]]:
    """Maximize ``-|x|`` over integer points of U(f) by exhaustive search.

    For each ``L`` the candidates are enumerated by increasing ``|x|`` inside
    the box from `integer_box`; the first feasible one is optimal for that
    ``L``.  ``f`` must be integer valued.  ``budget`` caps the number of
    candidates examined (default: the enumeration cap).
    """
    if any(v.denominator != 1 for v in f.values()):
        raise ValueError("max_dual_integer needs an integer-valued function")
    if budget is None:
        budget = get_cap()
    checked = 0
    best: Optional[Tuple[int, SignedVector]] = None
    for L in leaf_vectors(f.k, f.n):
        lo, hi = integer_box(f, L)
        if any(h is not None and h < l for l, h in zip(lo, hi)):
            continue
        rows = list(dual_rows(f, L).items())
        total = sum(lo)
        limit = None if best is None else best[0] - 1
        bounded = all(h is not None for h in hi)
        max_total = sum(hi) if bounded else None
        found = None
        while found is None:
            if limit is not None and total > limit:
                break
            if max_total is not None and total > max_total:
                break
            for x in _compositions(total, lo, hi):
                checked += 1
                if checked > budget:
                    raise BudgetExceeded(f"integer dual search exceeded {budget} candidates")
                if all(sum(p * v for p, v in zip(pattern, x)) <= rhs for pattern, rhs in rows):
                    found = x
                    break
            else:
                total += 1
        if found is not None and (best is None or total < best[0]):
            best = (total, SignedVector(found, L))
    if best is None:
        return None
    v = best[1]
    if in_U(f, v) is not None:
        raise AssertionError(f"integer search returned {v} outside U(f)")
    return Fraction(-best[0]), v


@dataclass
class Certificate:
    """A primal labeling and a dual vector with equal objective values."""

    primal: Labeling
    dual: SignedVector
    value: Fraction
    extracted: Optional[Labeling] = None
    tight: Tuple[Labeling, ...] = ()


@dataclass
class Discrepancy:
    """Why a min-max check failed, with both sides' values when available."""

    reason: str
    primal_value: Optional[Fraction] = None
    primal: Optional[Labeling] = None
    dual_value: Optional[Fraction] = None
    dual: Optional[SignedVector] = None
    notes: List[str] = field(default_factory=list)


def check_certificate(f: ValuedFunction, cert: Certificate) -> Optional[str]:
    """Independent check of a certificate: ``None`` if valid, else a reason."""
    if f(cert.primal) != cert.value:
        return f"f(primal) = {f(cert.primal)} but value is {cert.value}"
    if -cert.dual.norm != cert.value:
        return f"-|x| = {-cert.dual.norm} but value is {cert.value}"
    T = in_U(f, cert.dual)
    if T is not None:
        return f"dual vector is not in U(f): violated at {T}"
    if cert.extracted is not None and f(cert.extracted) != cert.value:
        return f"f(extracted) = {f(cert.extracted)} but value is {cert.value}"
    return None


def verify_minmax(f: ValuedFunction):
    """Compare the brute-force minimum with the dual optimum.

    Returns a `Certificate` when both sides agree exactly and a minimizer can
    be extracted from the dual optimum, otherwise a `Discrepancy`.
    """
    if f((ROOT,) * f.n) != 0:
        return Discrepancy("f is not normalized: f(0) != 0")
    pval, argmin = brute_force_min(f)
    dual = max_dual(f)
    if dual is None:
        return Discrepancy("U(f) is empty", pval, argmin)
    dval, v = dual
    if dval > pval:
        return Discrepancy("weak duality fails: dual exceeds primal", pval, argmin, dval, v)
    if dval != pval:
        return Discrepancy("duality gap", pval, argmin, dval, v)
    try:
        T = extract_minimizer(f, v)
    except (ExtractionError, TightnessError, NotInU) as exc:
        return Discrepancy(f"extraction failed: {exc}", pval, argmin, dval, v)
    cert = Certificate(argmin, v, pval, T, tight_labelings(f, v))
    problem = check_certificate(f, cert)
    if problem is not None:
        return Discrepancy(problem, pval, argmin, dval, v)
    return cert
