import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksubmod.dual import SignedVector, in_U
from ksubmod.functions import ValuedFunction, gen_local, zero
from ksubmod.linalg import rank
from ksubmod.minmax import max_dual
from ksubmod.polyhedron import (
    Basis,
    PairRow,
    embed_signed,
    eval_full,
    exchange_step,
    find_basis,
    full_vector,
    in_P,
    in_P_FT,
    is_basis,
    is_unified,
    norm_1inf,
    project_unified,
    random_objective,
    row_vector,
    tight_full,
    verify_ft,
    vertex_by_lp,
    zeros,
)

X1 = full_vector([[-1, 1, -1]])


def test_eval_full():
    assert eval_full(X1, (0,)) == 0
    assert eval_full(X1, (2,)) == 1
    y = full_vector([[1, 2], [3, 4]])
    assert eval_full(y, (2, 1)) == 5


def test_membership(E1):
    assert in_P(E1, X1) is None
    f = ValuedFunction.from_table(2, 1, [0, 2, 2])
    x = full_vector([[1, 1]])
    v = in_P(f, x)
    assert v.row == PairRow(0, 1, 2) and v.lhs == 2 and v.rhs == 0
    assert in_P_FT(f, x) is None
    assert in_P(zero(2, 2), zeros(2, 2)) is None


def test_unified():
    assert is_unified(zeros(2, 3))
    assert is_unified(full_vector([[2, -2, -2]]))
    assert not is_unified(full_vector([[1, -1, 0]]))
    v = SignedVector((1,), (2,))
    x = embed_signed(v, 3)
    assert x == X1 and is_unified(x)
    assert project_unified(x) == v
    assert norm_1inf(zeros(1, 3)) == 0 and norm_1inf(X1) == 1
    assert embed_signed(SignedVector((2,), (1,)), 1) == ((-2,),)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10**6))
def test_embed_project_roundtrip(k, n, seed):
    rng = random.Random(seed)
    v = SignedVector(tuple(rng.randint(1, 5) for _ in range(n)), tuple(rng.randint(1, k) for _ in range(n)))
    x = embed_signed(v, k)
    assert is_unified(x)
    assert norm_1inf(x) == v.norm
    if k >= 2:
        assert project_unified(x) == v
    for f in (gen_local(k, n, seed),):
        if in_U(f, v) is None:
            assert in_P(f, x) is None and in_P_FT(f, x) is None


def test_tight_full_example(E1):
    F, G = tight_full(E1, X1)
    assert {(0,), (1,), (2,)} <= set(F)
    assert G == [PairRow(0, 1, 2), PairRow(0, 2, 3)]
    F, G = tight_full(E1, embed_signed(SignedVector((0,), (1,)), 3))
    assert set(G) == {PairRow(0, 1, 2), PairRow(0, 1, 3), PairRow(0, 2, 3)}


def test_basis_examples():
    c = Fraction(3)
    f = ValuedFunction.from_table(1, 1, [0, c])
    assert is_basis(f, ((c,),), Basis(((1,),), ()))
    g = gen_local(2, 2, 7)
    x = vertex_by_lp(g, random_objective(2, 2, random.Random(1)))
    B = find_basis(g, x)
    assert B is not None and is_basis(g, x, B)
    assert not is_basis(g, x, Basis(B.B1[1:], B.B2))


def test_exchange_same_element_keeps_basis():
    g = gen_local(2, 2, 3)
    x = vertex_by_lp(g, random_objective(2, 2, random.Random(3)))
    B = find_basis(g, x)
    S = B.B1[0]
    assert set(exchange_step(g, x, B, S, S).B1) == set(B.B1)
    with pytest.raises(ValueError):
        exchange_step(g, x, B, S, (9, 9))


def test_vertex_of_zero_function():
    for k in (2, 3):
        c = tuple((Fraction(1),) * k for _ in range(2))
        assert vertex_by_lp(zero(k, 2), c) == zeros(2, k)
    with pytest.raises(ValueError):
        vertex_by_lp(zero(2, 1), ((0, 1),))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_sampled_vertices(k, n, seed):
    f = gen_local(k, n, seed)
    rng = random.Random(seed)
    x = vertex_by_lp(f, random_objective(n, k, rng))
    assert in_P(f, x) is None and in_P_FT(f, x) is None
    F, G = tight_full(f, x)
    assert rank([row_vector(r, n, k) for r in F + G]) == n * k
    B = find_basis(f, x)
    assert is_basis(f, x, B)
    if k <= 2:
        assert len(B.B2) <= (k - 1) * n
    if k <= 2:
        for S in B.B1:
            for T in B.B1:
                assert is_basis(f, x, exchange_step(f, x, B, S, T))
    if is_unified(x):
        v = project_unified(x)
        assert norm_1inf(x) == v.norm
        assert in_U(f, v) is None


def test_verify_ft_examples(E1):
    rep = verify_ft(E1)
    assert rep.ok and rep.ft_value == rep.min_value == rep.dual_value == -1
    assert verify_ft(zero(2, 2)).ft_value == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_verify_ft_random(k, n, seed):
    f = gen_local(k, n, seed)
    rep = verify_ft(f)
    assert rep.ok, rep.notes
    val, v = max_dual(f)
    assert rep.ft_value == val


def test_ft_detects_gap():
    f = ValuedFunction.from_table(2, 2, [0, 1, -1, 1, 3, 2, 3, 0, 1])
    rep = verify_ft(f)
    assert not rep.ok
    assert rep.min_value == -1 and rep.dual_value == -2
