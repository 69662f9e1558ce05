from __future__ import annotations

import itertools
import threading

import pytest
from hypothesis import given, settings, strategies as st

from zpcp import linalg
from zpcp.arith import Q, canonical_rep, is_p_local, vp
from zpcp.errors import Cancelled, DegenerateForm, DimensionMismatch, NotSublattice
from zpcp.modulestruct import counterexample_pair, regular_lattice
from zpcp.plattice import (
    ZpLattice,
    cancellation,
    dual_lattice,
    hnf_local,
    is_unimodular_over_local,
    lattice_index,
    lattice_intersection,
    lattice_member,
    lattice_sum,
    smith_local,
    snf_local,
)

SMALL_PRIMES = st.sampled_from([2, 3, 5])


def minors_oracle(A, p):
    """Elementary divisor exponents from gcd-of-minors valuations."""
    m = len(A)
    n = len(A[0]) if A else 0
    out, prev = [], 0
    for k in range(1, min(m, n) + 1):
        vals = [
            vp(linalg.det([[A[i][j] for j in cols] for i in rows]), p)
            for rows in itertools.combinations(range(m), k)
            for cols in itertools.combinations(range(n), k)
        ]
        d = min(vals)
        if d == float("inf"):
            break
        out.append(d - prev)
        prev = d
    return out


def member_oracle(v, rows, p):
    """Solve x * rows = v over Q and test locality of x (rows independent)."""
    x = linalg.solve_left(rows, v)
    return x is not None and all(is_p_local(c, p) for c in x)


@st.composite
def local_matrices(draw, max_dim=4, square=False):
    p = draw(SMALL_PRIMES)
    m = draw(st.integers(1, max_dim))
    n = m if square else draw(st.integers(1, max_dim))
    dens = [1, 1, p, p * p, 7]
    A = [[Q(draw(st.integers(-30, 30)), draw(st.sampled_from(dens))) for _ in range(n)] for _ in range(m)]
    return p, A


def _unit(p):
    return st.integers(-6, 6).filter(lambda x: x % p != 0)


@st.composite
def triangular(draw, p, n, lower, diag):
    T = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        T[i][i] = Q(draw(diag))
        for j in (range(i) if lower else range(i + 1, n)):
            T[i][j] = Q(draw(st.integers(-4, 4)), draw(st.sampled_from([1, 1, 2 if p != 2 else 3])))
    return T


@st.composite
def unimodular(draw, p, n):
    """Permutation times lower times upper triangular with p-unit diagonals."""
    perm = draw(st.permutations(range(n)))
    P = [[Q(int(j == perm[i])) for j in range(n)] for i in range(n)]
    Lo = draw(triangular(p, n, True, _unit(p)))
    Up = draw(triangular(p, n, False, _unit(p)))
    return linalg.mat_mul(P, linalg.mat_mul(Lo, Up))


@st.composite
def nonsingular(draw, p, n):
    """Integer-like nonsingular matrix whose determinant may carry powers of p."""
    diag = st.tuples(st.sampled_from([1, -1, 2]), st.integers(0, 2)).map(lambda t: t[0] * p ** t[1])
    D = draw(triangular(p, n, False, diag))
    U = draw(unimodular(p, n))
    return linalg.mat_mul(D, U)


@st.composite
def full_rank_lattices(draw, p=None, n=None):
    p = p or draw(SMALL_PRIMES)
    n = n or draw(st.integers(1, 4))
    C = draw(nonsingular(p, n))
    scale = Q(1, p ** draw(st.integers(0, 1)))
    return ZpLattice([[x * scale for x in row] for row in C], p, n)


# -- HNF ---------------------------------------------------------------------


def test_hnf_examples():
    for p in (2, 3, 5):
        assert hnf_local(linalg.identity(3), p) == linalg.identity(3)
        assert hnf_local([[p, 0], [1, 1]], p) == [[1, 1], [0, p]]
    assert hnf_local([[2, 0], [0, 1]], 3) == [[1, 0], [0, 1]]


def test_hnf_example_row_span_by_mutual_membership():
    p = 3
    H = hnf_local([[p, 0], [1, 1]], p)
    for v in ([p, 0], [1, 1]):
        assert member_oracle(v, H, p)
    for v in H:
        assert member_oracle(v, [[p, 0], [1, 1]], p)


@settings(max_examples=80)
@given(st.data())
def test_hnf_is_canonical_under_row_scrambles(data):
    p, A = data.draw(local_matrices())
    U = data.draw(unimodular(p, len(A)))
    assert hnf_local(linalg.mat_mul(U, A), p) == hnf_local(A, p)


@given(local_matrices())
def test_hnf_shape(pa):
    p, A = pa
    H = hnf_local(A, p)
    assert len(H) == linalg.rank(A)
    pivots = [next(j for j, x in enumerate(row) if x) for row in H]
    assert pivots == sorted(set(pivots))
    for i, (row, j) in enumerate(zip(H, pivots)):
        k = vp(row[j], p)
        assert row[j] == Q(p) ** k
        for above in H[:i]:
            assert canonical_rep(above[j], k, p) == above[j]
            if k >= 0 and is_p_local(above[j], p):
                assert above[j].denominator == 1 and 0 <= above[j] < p**k


# -- SNF ---------------------------------------------------------------------


def test_snf_examples():
    for p in (2, 3, 5):
        assert snf_local([[1, 0], [0, p * p]], p) == [0, 2]
        assert snf_local([[p, 1], [0, p]], p) == [0, 2]
        assert snf_local([[0, 0], [0, 0]], p) == []


@settings(max_examples=80)
@given(local_matrices(max_dim=3))
def test_snf_matches_minors_oracle(pa):
    p, A = pa
    assert snf_local(A, p) == minors_oracle(A, p)


@settings(max_examples=60)
@given(st.data())
def test_snf_invariant_under_two_sided_scrambles(data):
    p, A = data.draw(local_matrices())
    U = data.draw(unimodular(p, len(A)))
    V = data.draw(unimodular(p, len(A[0])))
    assert snf_local(linalg.mat_mul(linalg.mat_mul(U, A), V), p) == snf_local(A, p)


@given(local_matrices())
def test_smith_transforms(pa):
    p, A = pa
    exps, U, V, Vinv = smith_local(A, p)
    assert is_unimodular_over_local(U, p) and is_unimodular_over_local(V, p)
    D = linalg.mat_mul(linalg.mat_mul(U, A), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            expect = Q(p) ** exps[i] if i == j and i < len(exps) else 0
            assert x == expect
    assert linalg.mat_mul(V, Vinv) == linalg.identity(len(V))


# -- sums, intersections, membership ---------------------------------------------


def test_sum_examples():
    p = 3
    A = ZpLattice([[1, 2, 0], [0, 3, 1]], p, 3)
    assert lattice_sum(A, A) == A
    e1 = ZpLattice([[1, 0]], p, 2)
    e2 = ZpLattice([[0, 1]], p, 2)
    assert lattice_sum(e1, e2) == ZpLattice.standard(2, p)
    assert lattice_sum(A, A.scaled(p)) == A


def test_intersection_examples():
    for p in (2, 3, 5):
        std = ZpLattice([[1, 0], [0, 1]], p, 2)
        other = ZpLattice([[1, 1], [0, p]], p, 2)
        meet = lattice_intersection(std, other)
        assert meet == other
        for v in ([1, 1], [0, p]):
            assert member_oracle(v, meet.basis, p)
        for v in meet.basis:
            assert member_oracle(v, [[1, 1], [0, p]], p)
        L = ZpLattice([[1, 2], [0, 5]], p, 2)
        assert L & L == L
        assert L & L.scaled(p) == L.scaled(p)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        ZpLattice.standard(2, 3) + ZpLattice.standard(3, 3)
    with pytest.raises(DimensionMismatch):
        lattice_member([1, 2, 3], ZpLattice.standard(2, 3))


@settings(max_examples=60)
@given(st.data())
def test_intersection_by_membership(data):
    p = data.draw(SMALL_PRIMES)
    n = data.draw(st.integers(1, 3))
    A = data.draw(full_rank_lattices(p, n))
    B = data.draw(full_rank_lattices(p, n))
    C = A & B
    assert A.contains_lattice(C) and B.contains_lattice(C)
    # a random combination lies in C iff it lies in both
    for _ in range(5):
        v = [Q(data.draw(st.integers(-p**3, p**3)), data.draw(st.sampled_from([1, p, p * p]))) for _ in range(n)]
        both = member_oracle(v, A.basis, p) and member_oracle(v, B.basis, p)
        assert (v in C) == both


def test_membership_examples():
    p = 3
    L = ZpLattice([[1, 2, 0], [0, 3, 1]], p, 3)
    for row in L.basis:
        assert lattice_member(row, L)
        assert not lattice_member([x / p for x in row], L)


@given(st.data())
def test_membership_random_combinations(data):
    L = data.draw(full_rank_lattices())
    p = L.p
    coeffs = [Q(data.draw(st.integers(-20, 20)), data.draw(st.sampled_from([1, 2 if p != 2 else 3, p]))) for _ in L.basis]
    v = linalg.vec_mat(coeffs, L.basis)
    assert lattice_member(v, L) == all(is_p_local(c, p) for c in coeffs)


# -- index and duals ------------------------------------------------------------------


def test_index_examples():
    for p in (2, 3, 5):
        L = ZpLattice([[1, 2, 0], [0, 3, 1], [0, 0, 4]], p, 3)
        assert lattice_index(L, L.scaled(p)) == 3
        M = regular_lattice(p, 2)
        assert lattice_index(M.lattice, M.lattice.scaled(p)) == 2 * p
    M, L, _ = counterexample_pair(3)
    assert lattice_index(M.lattice, L.lattice) == 2


def test_index_requires_sublattice():
    p = 3
    L = ZpLattice.standard(2, p)
    with pytest.raises(NotSublattice):
        lattice_index(L.scaled(p), L)
    with pytest.raises(NotSublattice):
        lattice_index(L, ZpLattice([[1, 0]], p, 2))


@settings(max_examples=60)
@given(st.data())
def test_index_is_additive_and_matches_snf(data):
    p = data.draw(SMALL_PRIMES)
    n = data.draw(st.integers(1, 3))
    L1 = data.draw(full_rank_lattices(p, n))
    C1, C2 = data.draw(nonsingular(p, n)), data.draw(nonsingular(p, n))
    L2 = ZpLattice(linalg.mat_mul(C1, L1.basis), p, n)
    L3 = ZpLattice(linalg.mat_mul(C2, L2.basis), p, n)
    assert lattice_index(L1, L3) == lattice_index(L1, L2) + lattice_index(L2, L3)
    coords = [L1.coordinates(r) for r in L3.basis]
    assert lattice_index(L1, L3) == sum(snf_local(coords, p))
    assert lattice_index(L1, L3) == vp(linalg.det(C1), p) + vp(linalg.det(C2), p)


@given(st.data())
def test_unimodular_change_of_basis_keeps_the_lattice(data):
    L = data.draw(full_rank_lattices())
    U = data.draw(unimodular(L.p, L.rank))
    assert ZpLattice(linalg.mat_mul(U, L.basis), L.p, L.ambient_dim) == L


def _random_form(data, n):
    p = 7  # only used to build a rational congruence P D P^T with nonzero D
    P = data.draw(unimodular(p, n))
    D = [Q(data.draw(st.integers(1, 9)) * data.draw(st.sampled_from([1, -1]))) for _ in range(n)]
    return linalg.mat_mul(linalg.mat_mul(P, [[D[i] if i == j else 0 for j in range(n)] for i in range(n)]), linalg.transpose(P))


def test_dual_examples():
    p = 3
    L = ZpLattice([[1, 1], [0, 1]], p, 2)
    assert dual_lattice(L, linalg.identity(2)) == L
    with pytest.raises(DegenerateForm):
        dual_lattice(L, [[1, 1], [1, 1]])


@settings(max_examples=60)
@given(st.data())
def test_dual_properties(data):
    p = data.draw(SMALL_PRIMES)
    n = data.draw(st.integers(1, 3))
    A = data.draw(full_rank_lattices(p, n))
    B = data.draw(full_rank_lattices(p, n))
    F = _random_form(data, n)
    dA = dual_lattice(A, F)
    assert dual_lattice(dA, F) == A
    assert dual_lattice(A.scaled(p), F) == dA.scaled(Q(1, p))
    assert dual_lattice(A & B, F) == dA + dual_lattice(B, F)
    # every dual vector pairs integrally with every basis vector
    for x in dA.basis:
        for y in A.basis:
            assert is_p_local(linalg.dot(linalg.vec_mat(x, F), y), p)


def test_non_full_rank_lattices():
    p = 3
    L = ZpLattice([[1, 1, 0]], p, 3)
    assert L.rank == 1 and not L.is_full_rank()
    assert [2, 2, 0] in L
    assert [1, 0, 0] not in L
    d = dual_lattice(L, linalg.identity(3))
    assert d == ZpLattice([[Q(1, 2), Q(1, 2), 0]], p, 3)


def test_cancellation_interrupts_normal_forms():
    ev = threading.Event()
    ev.set()
    with cancellation(ev):
        with pytest.raises(Cancelled):
            hnf_local([[1, 2], [3, 4]], 3)
    assert hnf_local([[1, 2], [3, 4]], 3)
