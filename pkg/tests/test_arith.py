from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zpcp.arith import (
    PLocal,
    Q,
    canonical_rep,
    format_rational,
    is_p_local,
    is_p_unit,
    parse_p_local,
    parse_rational,
    residue,
    to_rational,
    vp,
)
from zpcp.errors import NotPLocal, PrimeMismatch

PRIMES = st.sampled_from([2, 3, 5, 7])
nonzero_int = st.integers(-10**6, 10**6).filter(bool)
rationals = st.builds(Q, st.integers(-10**6, 10**6), st.integers(1, 10**4))
nonzero_rationals = st.builds(Q, nonzero_int, st.integers(1, 10**4))


def _count_factor(n: int, p: int) -> int:
    n, k = abs(n), 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def test_vp_examples():
    for p in (2, 3, 5):
        assert vp(p, p) == 1
        assert vp(Q(1, p), p) == -1
        assert vp(0, p) == math.inf


def test_is_p_local_examples():
    assert is_p_local(Q(3, 2), 3)
    assert not is_p_local(Q(1, 3), 3)
    assert is_p_local(0, 5)


def test_is_p_unit_examples():
    assert is_p_unit(PLocal(2, 3))
    assert not is_p_unit(PLocal(3, 3))
    # 6/5 has one factor of 3 in the numerator
    assert _count_factor(6, 3) - _count_factor(5, 3) == 1
    assert not is_p_unit(PLocal(Q(6, 5), 3))


@given(nonzero_rationals, PRIMES)
def test_vp_matches_factor_counting(x, p):
    assert vp(x, p) == _count_factor(int(x.numerator), p) - _count_factor(int(x.denominator), p)


@given(nonzero_rationals, nonzero_rationals, PRIMES)
def test_vp_is_a_valuation(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)
    assert vp(x + y, p) >= min(vp(x, p), vp(y, p))


@given(rationals, rationals, PRIMES)
def test_plocal_ring_closure(x, y, p):
    if not (is_p_local(x, p) and is_p_local(y, p)):
        return
    a, b = PLocal(x, p), PLocal(y, p)
    assert (a + b).value == x + y
    assert (a - b).value == x - y
    assert (a * b).value == x * y
    if y != 0 and vp(y, p) == 0:
        assert (a / b).value == x / y


def test_division_by_non_unit_leaves_the_ring():
    with pytest.raises(NotPLocal):
        PLocal(1, 3) / PLocal(3, 3)
    # divisible numerators are fine
    assert (PLocal(9, 3) / PLocal(3, 3)).value == 3


def test_mixing_primes_is_an_error():
    with pytest.raises(PrimeMismatch):
        PLocal(1, 3) + PLocal(1, 5)


def test_plocal_rejects_p_in_denominator():
    with pytest.raises(NotPLocal):
        PLocal(Q(1, 6), 3)


@given(st.integers(-1000, 1000), st.integers(1, 1000), st.integers(1, 50))
def test_canonical_form_is_unique(n, d, k):
    assert Q(n * k, d * k) == Q(n, d)
    assert format_rational(Q(n * k, d * k)) == format_rational(Q(n, d))
    assert hash(Q(n, d)) == hash(Fraction(n, d))


def test_canonical_zero_and_format():
    z = Q(0, 7)
    assert z.numerator == 0 and z.denominator == 1
    assert format_rational(z) == "0"
    assert format_rational(Q(-4, 6)) == "-2/3"
    assert format_rational(5) == "5"


@given(rationals)
def test_format_parse_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("bad", ["1.5", "1e3", "", "abc", "1/0"])
def test_parse_rational_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_to_rational_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        to_rational(True)


def test_parse_p_local():
    assert parse_p_local("3/2", 3) == Q(3, 2)
    with pytest.raises(NotPLocal):
        parse_p_local("1/3", 3)


@given(st.integers(-500, 500), st.integers(1, 500).filter(lambda d: d % 3), st.integers(1, 3))
def test_residue_inverts_denominator(n, d, k):
    r = residue(Q(n, d), 3, k)
    assert 0 <= r < 3**k
    assert (r * d - n) % 3**k == 0


@given(rationals, st.integers(-2, 3), PRIMES)
def test_canonical_rep_is_a_coset_invariant(e, k, p):
    r = canonical_rep(e, k, p)
    assert is_p_local((e - r) / Q(p) ** k, p)
    # any shift by p^k Z_(p) lands on the same representative
    assert canonical_rep(e + Q(7 if p != 7 else 11) * Q(p) ** k, k, p) == r
