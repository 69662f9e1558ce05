from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from zpcp import linalg
from zpcp.arith import Q, is_p_local, vp
from zpcp.errors import NotInR, NotPLocal, PrimeMismatch
from zpcp.groupring import (
    Cyclo,
    GroupAlgebraElt,
    GroupRingElt,
    MaxOrderElt,
    components,
    e1,
    e_zeta,
    gr_mul,
    in_radical,
    involution,
    is_in_R,
    lift_pair,
    pi_valuation,
    regular_matrix,
    trace_reg,
)

PRIMES = [2, 3, 5, 7]


def poly_mul_mod(a, b, p):
    """Oracle: multiply as polynomials, then fold x^p = 1."""
    full = [Q(0)] * (2 * p - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            full[i + j] += Q(x) * Q(y)
    return [full[k] + (full[k + p] if k + p < len(full) else 0) for k in range(p)]


@st.composite
def ring_elts(draw, p=None):
    p = p or draw(st.sampled_from(PRIMES))
    nums = draw(st.lists(st.integers(-20, 20), min_size=p, max_size=p))
    dens = draw(st.lists(st.integers(1, 6).filter(lambda d: d % p), min_size=p, max_size=p))
    return GroupRingElt([Q(n, d) for n, d in zip(nums, dens)], p)


@st.composite
def ring_pairs(draw):
    p = draw(st.sampled_from(PRIMES))
    return draw(ring_elts(p)), draw(ring_elts(p))


def sigma(p, k=1):
    return GroupRingElt.sigma(p, k)


def test_norm_element_is_killed_by_one_minus_sigma():
    for p in PRIMES:
        one = GroupRingElt.one(p)
        assert gr_mul(one - sigma(p), GroupRingElt.norm_element(p)) == GroupRingElt.zero(p)


def test_square_of_one_minus_sigma_p3():
    x = GroupRingElt([1, -1, 0], 3)
    assert gr_mul(x, x) == GroupRingElt([1, -2, 1], 3)


@given(ring_pairs())
def test_multiplication_matches_polynomial_oracle(pair):
    x, y = pair
    assert gr_mul(x, y).coeffs == tuple(poly_mul_mod(x.coeffs, y.coeffs, x.p))
    assert gr_mul(GroupRingElt.one(x.p), x) == x


def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        GroupRingElt.one(3) * GroupRingElt.one(5)


def test_group_ring_rejects_non_local_coefficients():
    with pytest.raises(NotPLocal):
        GroupRingElt([Q(1, 3), 0, 0], 3)


def test_involution_examples():
    for p in PRIMES:
        assert involution(GroupRingElt.one(p)) == GroupRingElt.one(p)
        assert involution(sigma(p)) == sigma(p, p - 1)


@given(ring_elts())
def test_involution_is_an_involution(x):
    assert involution(involution(x)) == x


@given(ring_pairs())
def test_involution_is_multiplicative(pair):
    x, y = pair
    assert involution(x * y) == involution(x) * involution(y)


def test_components_examples():
    for p in PRIMES:
        pi = Cyclo.pi(p)
        assert components(GroupRingElt.one(p) - sigma(p)) == MaxOrderElt(0, pi)
        assert components(GroupRingElt.one(p)) == MaxOrderElt(1, Cyclo.from_int(1, p))
        assert components(e1(p)) == MaxOrderElt(1, Cyclo.from_int(0, p))
        assert components(e_zeta(p)) == MaxOrderElt(0, Cyclo.from_int(1, p))


def test_cyclotomic_reduction_p2():
    # for p = 2, T = Z_(2), zeta = -1, pi = 2
    assert Cyclo.zeta(2) == Cyclo.from_int(-1, 2)
    assert Cyclo.pi(2) == Cyclo.from_int(2, 2)
    assert pi_valuation(Cyclo.pi(2)) == 1


@given(ring_pairs())
def test_components_is_a_ring_homomorphism(pair):
    x, y = pair
    assert components(x * y) == components(x) * components(y)
    assert components(x + y) == components(x) + components(y)


@given(ring_elts())
def test_components_agree_with_evaluation_at_zeta(x):
    p = x.p
    t = Cyclo.from_int(0, p)
    for i, c in enumerate(x.coeffs):
        t = t + Cyclo.zeta(p, i) * c
    assert components(x).t == t
    assert components(x).s == sum(x.coeffs)


@given(ring_elts())
def test_lift_pair_inverts_components(x):
    m = components(x)
    assert is_in_R(m)
    assert lift_pair(m) == x


def test_lift_pair_examples():
    for p in PRIMES:
        assert lift_pair(MaxOrderElt(0, Cyclo.pi(p))) == GroupRingElt.one(p) - sigma(p)
        assert lift_pair(MaxOrderElt(1, Cyclo.from_int(1, p))) == GroupRingElt.one(p)
        with pytest.raises(NotInR):
            lift_pair(MaxOrderElt(1, Cyclo.from_int(0, p)))


def test_is_in_R_examples():
    for p in PRIMES:
        assert is_in_R(MaxOrderElt(p, Cyclo.from_int(0, p)))
        assert lift_pair(MaxOrderElt(p, Cyclo.from_int(0, p))) == GroupRingElt.norm_element(p)
        assert not is_in_R(MaxOrderElt(1, Cyclo.from_int(0, p)))
        assert is_in_R(MaxOrderElt(0, Cyclo.pi(p)))


@st.composite
def max_order_pairs(draw):
    p = draw(st.sampled_from(PRIMES))
    s = draw(st.integers(-9, 9))
    t = draw(st.lists(st.integers(-9, 9), min_size=p - 1, max_size=p - 1))
    return MaxOrderElt(s, Cyclo(t, p))


@given(max_order_pairs())
def test_is_in_R_is_the_fibre_congruence(m):
    p = m.p
    # the lift has coefficients t_i + (s - sum t) / p, so R-membership is locality of that shift
    assert is_in_R(m) == is_p_local((m.s - m.t.at_one()) / p, p)


def test_in_radical_examples():
    for p in PRIMES:
        assert in_radical(GroupRingElt.one(p) - sigma(p))
        assert not in_radical(GroupRingElt.one(p))
        assert in_radical(sigma(p, 2) * p)


@settings(max_examples=60)
@given(ring_elts())
def test_units_are_exactly_the_elements_outside_the_radical(x):
    p = x.p
    # oracle: solve y * x = 1 through the convolution matrix, then test locality
    A = regular_matrix(x)
    y = linalg.solve_left(A, [1] + [0] * (p - 1)) if linalg.det(A) else None
    local_inverse = y is not None and all(is_p_local(c, p) for c in y)
    assert local_inverse == (not in_radical(x))
    assert x.is_unit() == local_inverse


def test_trace_reg_examples():
    for p in PRIMES:
        assert trace_reg(GroupRingElt.one(p)) == p
        for m in range(1, p):
            assert trace_reg(sigma(p, m)) == 0
        # matrix trace of the regular representation as an independent route
        assert trace_reg(e1(p)) == 1
        assert sum(regular_matrix(e1(p))[i][i] for i in range(p)) == 1


@given(ring_elts())
def test_trace_matches_regular_matrix_trace(x):
    R = regular_matrix(x)
    assert trace_reg(x) == sum(R[i][i] for i in range(x.p))


@given(ring_elts())
def test_trace_of_norm_form_is_finite(x):
    if x:
        assert vp(trace_reg(x * involution(x)), x.p) < math.inf


def test_trace_form_gram_is_identity():
    for p in PRIMES:
        G = [[trace_reg(sigma(p, i) * involution(sigma(p, j))) / p for j in range(p)] for i in range(p)]
        assert G == linalg.identity(p)


@given(ring_elts())
def test_involution_conjugates_the_faithful_component(x):
    a, b = components(involution(x)), components(x)
    assert a.s == b.s
    assert a.t == b.t.conj()


def test_pi_valuation_examples():
    for p in PRIMES:
        assert pi_valuation(Cyclo.pi(p)) == 1
        assert pi_valuation(Cyclo.from_int(1, p)) == 0
        assert pi_valuation(Cyclo.from_int(0, p)) == math.inf


@pytest.mark.parametrize("p", PRIMES)
def test_pi_valuation_of_p(p):
    # divide p by pi exactly, p - 1 times; the quotient is then a unit of T
    x = Cyclo.from_int(p, p)
    pi = Cyclo.pi(p)
    for _ in range(p - 1):
        x = x / pi
        assert x.is_integral()
    assert not (x / pi).is_integral()
    assert pi_valuation(Cyclo.from_int(p, p)) == p - 1


@given(st.sampled_from(PRIMES), st.integers(0, 6), st.integers(1, 50))
def test_pi_valuation_of_products(p, k, u):
    if u % p == 0:
        return
    x = Cyclo.pi(p) ** k * Cyclo.from_int(u, p)
    assert pi_valuation(x) == k


def test_idempotents():
    for p in PRIMES:
        assert e1(p) * e1(p) == e1(p)
        assert e_zeta(p) * e_zeta(p) == e_zeta(p)
        assert e1(p) * e_zeta(p) == GroupAlgebraElt.zero(p)
