"""Seeded instance generators: build an object with a known invariant, then disguise it.

Two disguises are used. An R-unimodular change of R-basis (a matrix over R
whose determinant has unit augmentation) moves a sublattice around inside
R^a without changing the ambient lattice. A rational change of ambient
coordinates x -> x C then hides the block shape of sigma and of the form.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import linalg
from .arith import Q
from .errors import DegenerateForm
from .groupring import GroupAlgebraElt, GroupRingElt, in_radical, regular_matrix
from .hermitian import FormedLattice, hermitian_to_bilinear, standard_r_basis
from .modulestruct import SigmaLattice, block_lattice, regular_lattice

RNG_ALGORITHM = "python-random-mt19937"


def make_rng(*key) -> random.Random:
    """Deterministic generator keyed by any tuple of str/int parts."""
    return random.Random(":".join(map(str, key)))


def random_ring_elt(rng: random.Random, p: int, bound: int = 2) -> GroupRingElt:
    return GroupRingElt([rng.randint(-bound, bound) for _ in range(p)], p)


def det_over_ring(U: Sequence[Sequence[GroupAlgebraElt]]) -> GroupAlgebraElt:
    """Determinant over the commutative ring R by cofactor expansion."""
    n = len(U)
    if n == 1:
        return U[0][0]
    p = U[0][0].p
    total = GroupRingElt.zero(p)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in U[1:]]
        term = U[0][j] * det_over_ring(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def random_r_unimodular(rng: random.Random, p: int, a: int, bound: int = 2, max_tries: int = 10_000) -> list:
    """A random a x a matrix over R with unit determinant (rejection sampling)."""
    for _ in range(max_tries):
        U = [[random_ring_elt(rng, p, bound) for _ in range(a)] for _ in range(a)]
        if not in_radical(det_over_ring(U)):
            return U
    raise RuntimeError("failed to sample an R-unimodular matrix")


def conj_transpose(U: Sequence[Sequence[GroupAlgebraElt]]) -> list:
    a = len(U)
    return [[U[j][i].involution() for j in range(a)] for i in range(a)]


def ring_mat_mul(A, B) -> list:
    p = A[0][0].p
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            s = GroupRingElt.zero(p)
            for l in range(m):
                s = s + A[i][l] * B[l][j]
            row.append(s)
        out.append(row)
    return out


def ambient_matrix(U: Sequence[Sequence[GroupAlgebraElt]], p: int) -> list:
    """The pa x pa matrix of g_i -> sum_j U_ij g_j on the standard R^a."""
    a = len(U)
    out = linalg.zeros(p * a, p * a)
    for i in range(a):
        for j in range(a):
            block = regular_matrix(U[i][j])
            for k in range(p):
                for l in range(p):
                    out[i * p + k][j * p + l] = block[k][l]
    return out


def random_ambient_change(rng: random.Random, N: int, bound: int = 1) -> tuple:
    """An invertible integer matrix Q and its inverse."""
    while True:
        C = [[Q(rng.randint(-bound, bound) + (i == j)) for j in range(N)] for i in range(N)]
        if linalg.det(C) != 0:
            return C, linalg.inverse(C)


def disguise_module(L: SigmaLattice, C, Cinv) -> SigmaLattice:
    sigma = linalg.mat_mul(linalg.mat_mul(Cinv, L.sigma), C)
    return SigmaLattice(L.lattice.image(C), sigma, check=False)


def disguise_formed(L: FormedLattice, C, Cinv) -> FormedLattice:
    form = linalg.mat_mul(linalg.mat_mul(Cinv, L.form), linalg.transpose(Cinv))
    return FormedLattice(disguise_module(L.module, C, Cinv), form, check=False)


def free_pair(p: int, a: int, t: int, rng: random.Random, *, ambient: bool = True) -> tuple:
    """(M, L) with M free of rank a and L = R g_1 + .. + R g_t + p R g_{t+1} + .. in disguise."""
    if not 0 <= t <= a:
        raise ValueError("need 0 <= t <= a")
    M = regular_lattice(p, a)
    gens = [[Q(p if (j == i * p and i >= t) else int(j == i * p)) for j in range(p * a)] for i in range(a)]
    U = random_r_unimodular(rng, p, a)
    Phi = ambient_matrix(U, p)
    L = M.with_lattice(M.r_span(gens).lattice.image(Phi))
    M = M.with_lattice(M.lattice.image(Phi))
    if ambient:
        C, Cinv = random_ambient_change(rng, p * a)
        M, L = disguise_module(M, C, Cinv), disguise_module(L, C, Cinv)
        L = M.with_lattice(L.lattice)
    return M, L


def elementary_hermitian_gram(p: int, a: int, t: int, rng: random.Random) -> list:
    """U diag(1,..,1,p,..,p) U* for a random R-unimodular U; t ones."""
    one = GroupRingElt.one(p)
    zero = GroupRingElt.zero(p)
    D = [[(one if i < t else one * p) if i == j else zero for j in range(a)] for i in range(a)]
    U = random_r_unimodular(rng, p, a)
    return ring_mat_mul(ring_mat_mul(U, D), conj_transpose(U))


def elementary_formed(p: int, a: int, t: int, rng: random.Random, *, ambient: bool = True) -> FormedLattice:
    L = hermitian_to_bilinear(elementary_hermitian_gram(p, a, t, rng), p)
    if ambient:
        C, Cinv = random_ambient_change(rng, p * a)
        L = disguise_formed(L, C, Cinv)
    return L


def random_invariant_form(rng: random.Random, L: SigmaLattice, bound: int = 3) -> list:
    """Group average of a random symmetric integer matrix; non-degenerate."""
    N = L.ambient_dim
    powers = L.sigma_powers()
    while True:
        A = linalg.zeros(N, N)
        for i in range(N):
            for j in range(i, N):
                A[i][j] = A[j][i] = Q(rng.randint(-bound, bound))
        F = linalg.zeros(N, N)
        for S in powers:
            T = linalg.mat_mul(linalg.mat_mul(S, A), linalg.transpose(S))
            F = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(F, T)]
        if linalg.det(F) != 0:
            return F


def random_formed_lattice(p: int, a: int, b: int, c: int, rng: random.Random, *, ambient: bool = True) -> FormedLattice:
    M = block_lattice(p, a, b, c)
    L = FormedLattice(M, random_invariant_form(rng, M), check=False)
    if ambient:
        C, Cinv = random_ambient_change(rng, M.ambient_dim)
        L = disguise_formed(L, C, Cinv)
    return L


def block_type_instance(p: int, a: int, b: int, c: int, rng: random.Random, *, ambient: bool = True) -> SigmaLattice:
    M = block_lattice(p, a, b, c)
    if ambient and M.ambient_dim:
        C, Cinv = random_ambient_change(rng, M.ambient_dim)
        M = disguise_module(M, C, Cinv)
    return M


def random_conjugate_symmetric(rng: random.Random, p: int, a: int, bound: int = 3) -> list:
    """A random non-degenerate conjugate-symmetric a x a matrix over R."""
    while True:
        G = [[None] * a for _ in range(a)]
        for i in range(a):
            x = random_ring_elt(rng, p, bound)
            G[i][i] = x + x.involution()
            for j in range(i + 1, a):
                y = random_ring_elt(rng, p, bound)
                G[i][j] = y
                G[j][i] = y.involution()
        try:
            hermitian_to_bilinear(G, p)
        except DegenerateForm:
            continue
        return G


__all__ = [
    "RNG_ALGORITHM",
    "make_rng",
    "random_ring_elt",
    "det_over_ring",
    "random_r_unimodular",
    "ambient_matrix",
    "random_ambient_change",
    "disguise_module",
    "disguise_formed",
    "free_pair",
    "elementary_hermitian_gram",
    "elementary_formed",
    "random_invariant_form",
    "random_formed_lattice",
    "block_type_instance",
    "random_conjugate_symmetric",
    "standard_r_basis",
]
