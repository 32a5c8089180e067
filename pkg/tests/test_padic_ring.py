import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_delta_residues
from unitary_dieudonne.padic_ring import (PrecisionError, context_from_json, default_modulus,
                                          delta_element, make_context, teichmuller,
                                          valuation_of_coeffs)

CONTEXTS = [make_context(3, 1, 6), make_context(3, 2, 6), make_context(5, 2, 5),
            make_context(7, 3, 3), make_context(3, 4, 4)]


def elements(ctx):
    q = ctx.p ** ctx.N
    return st.lists(st.integers(0, q - 1), min_size=ctx.m, max_size=ctx.m).map(ctx.element)


ctx_and_three = st.sampled_from(CONTEXTS).flatmap(
    lambda c: st.tuples(st.just(c), elements(c), elements(c), elements(c)))


@settings(max_examples=150, deadline=None)
@given(ctx_and_three)
def test_ring_axioms(data):
    ctx, a, b, c = data
    assert ctx.add(a, b) == ctx.add(b, a)
    assert ctx.mul(a, b) == ctx.mul(b, a)
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.mul(a, ctx.one) == a
    assert ctx.add(a, ctx.neg(a)) == ctx.zero
    assert ctx.sub(a, b) == ctx.add(a, ctx.neg(b))


@settings(max_examples=150, deadline=None)
@given(ctx_and_three)
def test_frobenius_is_ring_automorphism_of_order_m(data):
    ctx, a, b, _ = data
    s = ctx.frobenius
    assert s(ctx.mul(a, b)) == ctx.mul(s(a), s(b))
    assert s(ctx.add(a, b)) == ctx.add(s(a), s(b))
    assert s(a, ctx.m) == a
    assert s(s(a), -1) == a
    assert s(a, 2) == s(s(a))


@settings(max_examples=150, deadline=None)
@given(ctx_and_three)
def test_frobenius_lifts_the_p_power_map(data):
    ctx, a, _, _ = data
    lhs = ctx.frobenius(a)
    rhs = ctx.power(a, ctx.p)
    assert all((x - y) % ctx.p == 0 for x, y in zip(lhs, rhs))


@settings(max_examples=150, deadline=None)
@given(ctx_and_three)
def test_valuation_is_additive(data):
    ctx, a, b, _ = data
    va, vb = ctx.valuation(a), ctx.valuation(b)
    vab = ctx.valuation(ctx.mul(a, b))
    assert vab == min(va + vb, ctx.N)
    assert ctx.valuation(ctx.add(a, b)) >= min(va, vb)


@settings(max_examples=100, deadline=None)
@given(ctx_and_three)
def test_unit_inverse_and_division(data):
    ctx, a, b, _ = data
    if ctx.valuation(a) == 0:
        assert ctx.mul(a, ctx.inverse(a)) == ctx.one
    if ctx.valuation(b) == 0:
        assert ctx.mul(ctx.divide(a, b), b) == a


def test_inverse_of_nonunit_raises():
    ctx = CONTEXTS[1]
    with pytest.raises((ZeroDivisionError, ArithmeticError, ValueError)):
        ctx.inverse(ctx.p_power(1))


@pytest.mark.parametrize("p,m", [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_default_modulus_is_lex_least_irreducible(p, m):
    x = sympy.Symbol("x")
    f = default_modulus(p, m)
    assert len(f) == m + 1 and f[-1] == 1
    assert sympy.Poly(list(reversed(f)), x, modulus=p).is_irreducible
    # nothing lexicographically smaller (low coefficients first, as stored) is irreducible
    import itertools
    for low in itertools.product(range(p), repeat=m):
        cand = tuple(reversed(low))
        if cand >= tuple(reversed(f[:-1])):
            break
        if sympy.Poly([1] + list(low), x, modulus=p).is_irreducible:
            pytest.fail(f"{cand} is a smaller irreducible modulus")


@pytest.mark.parametrize("p", [3, 5, 7])
def test_delta_matches_residue_search(p):
    ctx = make_context(p, 2, 6)
    d = delta_element(ctx)
    residues = brute_force_delta_residues(p, ctx.modulus)
    assert tuple(c % p for c in d) in residues
    assert ctx.frobenius(d) == ctx.neg(d)
    assert ctx.valuation(d) == 0


def test_delta_residue_values():
    # frozen from the residue search: the solutions of d^p = -d over F_9 with x^2 + 1
    assert brute_force_delta_residues(3, [1, 0, 1]) == [(0, 1), (0, 2)]


def test_delta_needs_even_degree():
    with pytest.raises(ValueError):
        delta_element(make_context(3, 1, 5))


@pytest.mark.parametrize("ctx", CONTEXTS)
def test_teichmuller_is_fixed_by_power_q(ctx):
    rng = random.Random(ctx.p * 10 + ctx.m)
    for _ in range(5):
        res = [rng.randrange(ctx.p) for _ in range(ctx.m)]
        t = teichmuller(ctx, res)
        assert tuple(c % ctx.p for c in t) == tuple(res)
        assert ctx.power(t, ctx.p ** ctx.m) == t


def test_valuation_of_coeffs_caps():
    assert valuation_of_coeffs([0, 0], 3, 7) == 7
    assert valuation_of_coeffs([9, 27], 3, 7) == 2
    assert valuation_of_coeffs([5, 0], 5, 3) == 1


def test_context_json_round_trip():
    for ctx in CONTEXTS:
        assert context_from_json(ctx.to_json()) == ctx


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        make_context(3, 2, 5, [2, 0, 1])   # x^2 + 2 = (x - 1)(x + 1) over F_3


def test_precision_error_carries_recommendation():
    err = PrecisionError("too small", recommended_precision=17)
    assert err.recommended_precision == 17
    assert isinstance(err, ArithmeticError)


def test_p_two_rejected():
    with pytest.raises(ValueError):
        make_context(2, 2, 8)
