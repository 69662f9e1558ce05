"""Sigma-invariant bilinear forms, R-valued Hermitian forms and Jordan splitting.

Bilinear forms live on the ambient space Q^N: B(x, y) = x F y^T. A sigma-lattice
carrying such an F with sigma F sigma^T = F is a :class:`FormedLattice`.

Hermitian forms are linear in the first argument and conjugate-linear in the
second, h(x, y r) = h(x, y) r-bar, and correspond to B via
B = (1/p) Tr_reg(h), inverted by h(x, y) = sum_k B(x, y sigma^k) sigma^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .arith import Q, Rational, is_p_local, vp
from .errors import (
    DegenerateForm,
    InternalContradiction,
    NotElementary,
    NotFree,
    NotSigmaInvariant,
    NotUnimodularSummand,
    PreconditionViolated,
)
from .groupring import Cyclo, GroupAlgebraElt, MaxOrderElt, components, lift_pair
from .modulestruct import (
    SigmaLattice,
    block_sigma,
    compatible_basis,
    r_basis_of_free,
    verify_compatible,
)
from .plattice import ZpLattice, dual_lattice


class FormedLattice:
    """A sigma-lattice in a non-degenerate sigma-invariant rational bilinear space."""

    __slots__ = ("module", "form")

    def __init__(self, module: SigmaLattice, form: Sequence[Sequence], *, check: bool = True):
        form = linalg.as_matrix(form)
        self.module = module
        self.form = form
        if check:
            N = module.ambient_dim
            if len(form) != N or any(len(r) != N for r in form):
                raise PreconditionViolated(f"form must be {N}x{N}")
            if form != linalg.transpose(form):
                raise PreconditionViolated("form is not symmetric")
            if N and linalg.det(form) == 0:
                raise DegenerateForm("form is degenerate")
            s = module.sigma
            if linalg.mat_mul(linalg.mat_mul(s, form), linalg.transpose(s)) != form:
                raise NotSigmaInvariant("sigma is not an isometry of the form")

    @property
    def p(self) -> int:
        return self.module.p

    @property
    def lattice(self) -> ZpLattice:
        return self.module.lattice

    @property
    def rank(self) -> int:
        return self.module.rank

    def gram(self) -> list:
        return self.lattice.gram(self.form)

    def with_lattice(self, lattice: ZpLattice) -> "FormedLattice":
        return FormedLattice(self.module.with_lattice(lattice), self.form, check=False)

    def bilinear(self, x, y) -> Rational:
        return linalg.dot(linalg.vec_mat(x, self.form), y)

    def __repr__(self):
        return f"FormedLattice(rank={self.rank}, N={self.module.ambient_dim}, p={self.p})"


@dataclass
class JordanSplit:
    L0: FormedLattice
    L1: FormedLattice
    t: int
    basis: list
    checks: list = field(default_factory=list)


# -- Hermitian <-> bilinear --------------------------------------------------


def is_conjugate_symmetric(G: Sequence[Sequence[GroupAlgebraElt]]) -> bool:
    a = len(G)
    return all(G[j][i] == G[i][j].involution() for i in range(a) for j in range(a))


def bilinear_to_hermitian(L: FormedLattice, basis: Sequence[Sequence]) -> list:
    """Hermitian Gram h(g_i, g_j) = sum_k B(g_i, g_j sigma^k) sigma^k."""
    s = L.module.sigma
    F = L.form
    if linalg.mat_mul(linalg.mat_mul(s, F), linalg.transpose(s)) != F:
        raise NotSigmaInvariant("sigma is not an isometry of the form")
    p = L.p
    orbits = [L.module.orbit(g) for g in basis]
    rows = [linalg.vec_mat(g, F) for g in basis]
    G = []
    for i in range(len(basis)):
        Gi = []
        for j in range(len(basis)):
            coeffs = [linalg.dot(rows[i], w) for w in orbits[j]]
            x = GroupAlgebraElt(coeffs, p)
            Gi.append(x.to_ring() if x.is_integral() else x)
        G.append(Gi)
    return G


def hermitian_to_bilinear(G: Sequence[Sequence[GroupAlgebraElt]], p: int) -> FormedLattice:
    """The standard free lattice R^a with B(g_i s^k, g_j s^l) = (1/p) Tr_reg(s^k G_ij s^-l)."""
    a = len(G)
    if any(len(row) != a for row in G):
        raise PreconditionViolated("Hermitian Gram must be square")
    if not is_conjugate_symmetric(G):
        raise PreconditionViolated("Hermitian Gram is not conjugate-symmetric")
    N = p * a
    F = linalg.zeros(N, N)
    for i in range(a):
        for j in range(a):
            c = G[i][j].coeffs
            for k in range(p):
                for l in range(p):
                    F[i * p + k][j * p + l] = c[(l - k) % p]
    if N and linalg.det(F) == 0:
        raise DegenerateForm("Hermitian form is degenerate")
    module = SigmaLattice(ZpLattice.standard(N, p), block_sigma(p, a=a), check=False)
    return FormedLattice(module, F, check=False)


def standard_r_basis(p: int, a: int) -> list:
    N = p * a
    return [[Q(int(j == i * p)) for j in range(N)] for i in range(a)]


# -- duality and predicates --------------------------------------------------


def dual_of(L: FormedLattice) -> FormedLattice:
    return L.with_lattice(dual_lattice(L.lattice, L.form))


def _not_contained(A: ZpLattice, B: ZpLattice):
    """A basis vector of A outside B, or None when A <= B."""
    for row in A.basis:
        if row not in B:
            return row
    return None


def integrality_witness(L: FormedLattice):
    return _not_contained(L.lattice, dual_of(L).lattice)


def modularity_witness(L: FormedLattice, j: int):
    D = dual_of(L).lattice.scaled(Q(L.p) ** j)
    return _not_contained(D, L.lattice) or _not_contained(L.lattice, D)


def elementary_witness(L: FormedLattice):
    D = dual_of(L).lattice
    return _not_contained(L.lattice, D) or _not_contained(D.scaled(L.p), L.lattice)


def is_integral(L: FormedLattice) -> bool:
    return integrality_witness(L) is None


def is_modular(L: FormedLattice, j: int) -> bool:
    return modularity_witness(L, j) is None


def is_unimodular(L: FormedLattice) -> bool:
    return is_modular(L, 0)


def is_elementary(L: FormedLattice) -> bool:
    return elementary_witness(L) is None


# -- dual bases ----------------------------------------------------------------


def hermitian_dual_basis(L: FormedLattice, basis: Sequence[Sequence]) -> list:
    """Vectors g*_i with h(g*_i, g_j) = delta_ij, i.e. B(g*_i, g_j sigma^k) = delta_ij delta_k0."""
    rows = [w for g in basis for w in L.module.orbit(g)]
    G = linalg.mat_mul(linalg.mat_mul(rows, L.form), linalg.transpose(rows))
    Ginv = linalg.inverse(G)
    p = L.p
    dual_rows = linalg.mat_mul(Ginv, rows)
    return [dual_rows[i * p] for i in range(len(basis))]


def base_change_matrix(L: FormedLattice, basis: Sequence[Sequence], vectors: Sequence[Sequence]) -> list:
    """X over Q C_p with vectors_i = sum_j X_ij g_j."""
    p = L.p
    rows = [w for g in basis for w in L.module.orbit(g)]
    X = []
    for v in vectors:
        c = linalg.solve_left(rows, v)
        if c is None:
            raise PreconditionViolated("vector is outside the span of the basis")
        X.append([GroupAlgebraElt(c[j * p:(j + 1) * p], p) for j in range(len(basis))])
    return X


def to_components(G: Sequence[Sequence[GroupAlgebraElt]]) -> list:
    return [[components(x) for x in row] for row in G]


# -- Jordan splitting ----------------------------------------------------------


def projection_split(L: FormedLattice, L0: FormedLattice) -> FormedLattice:
    """Orthogonal complement of a unimodular sublattice L0 inside L."""
    p = L.p
    B0 = L0.lattice.basis
    if not B0:
        return L
    if not L.lattice.contains_lattice(L0.lattice):
        raise NotUnimodularSummand("L0 is not contained in L")
    G0 = linalg.mat_mul(linalg.mat_mul(B0, L.form), linalg.transpose(B0))
    d = linalg.det(G0)
    if d == 0 or vp(d, p) != 0:
        raise NotUnimodularSummand("Gram matrix of L0 is not invertible over Z_(p)")
    G0inv = linalg.inverse(G0)
    B0t = linalg.transpose(B0)
    gens = []
    for x in L.lattice.basis:
        coeff = linalg.vec_mat(linalg.vec_mat(linalg.vec_mat(x, L.form), B0t), G0inv)
        if not all(is_p_local(c, p) for c in coeff):
            raise NotUnimodularSummand("projection onto L0 leaves Z_(p); L does not pair integrally with L0")
        gens.append(linalg.sub(x, linalg.vec_mat(coeff, B0)))
    return L.with_lattice(ZpLattice(gens, p, L.module.ambient_dim))


def verify_jordan(L: FormedLattice, split: JordanSplit) -> list:
    """Machine checks of a Jordan splitting as (name, passed) pairs."""
    p = L.p
    L0, L1 = split.L0, split.L1
    B0, B1 = L0.lattice.basis, L1.lattice.basis
    cross = linalg.mat_mul(linalg.mat_mul(B0, L.form), linalg.transpose(B1)) if B0 and B1 else []
    checks = [
        ("orthogonal", all(x == 0 for row in cross for x in row)),
        ("direct_sum", L0.rank + L1.rank == L.rank and (L0.lattice + L1.lattice) == L.lattice),
        ("L0_unimodular", dual_lattice(L0.lattice, L.form) == L0.lattice),
        ("L1_p_modular", dual_lattice(L1.lattice, L.form).scaled(p) == L1.lattice),
        ("rank_L0", L0.rank == p * split.t),
    ]
    return checks


def jordan_split(L: FormedLattice) -> JordanSplit:
    """L = L0 + L1 orthogonally, L0 unimodular and L1 p-modular, both free."""
    p = L.p
    try:
        r_basis_of_free(L.module)
    except NotFree:
        raise NotFree("L is not a free R-lattice") from None
    w = elementary_witness(L)
    if w is not None:
        raise NotElementary("L is not elementary", witness=w)
    M = dual_of(L)
    result = compatible_basis(M.module, L.module)
    if not verify_compatible(M.module, L.module, result):
        raise InternalContradiction("compatible basis failed verification")
    t = result.t
    gs = result.basis
    L0 = L.with_lattice(L.module.r_span(gs[:t]).lattice if t else ZpLattice.zero(L.module.ambient_dim, p))
    L1 = projection_split(L, L0)
    split = JordanSplit(L0=L0, L1=L1, t=t, basis=gs)
    split.checks = verify_jordan(L, split)
    failed = [name for name, ok in split.checks if not ok]
    if failed:
        raise InternalContradiction(f"Jordan splitting failed checks: {', '.join(failed)}")
    return split


# -- the non-elementary example ----------------------------------------------


def example_dim2_gram(p: int) -> list:
    """[[(p,0), (0,pi)], [(0,pi-bar), (p,0)]] as elements of R."""
    pe1 = lift_pair(MaxOrderElt(p, Cyclo.from_int(0, p)))
    pi = lift_pair(MaxOrderElt(0, Cyclo.pi(p)))
    return [[pe1, pi], [pi.involution(), pe1]]


def example_dim2_reference_inverse(p: int) -> list:
    """Reference fixture for the example's dual Gram in S + T coordinates.

    Its off-diagonal entries carry the opposite sign to the componentwise
    inverse returned by :func:`example_dim2_true_inverse`.
    """
    pi = Cyclo.pi(p)
    zero = Cyclo.from_int(0, p)
    return [
        [MaxOrderElt(Q(1, p), zero), MaxOrderElt(0, -(pi.conj().inverse()))],
        [MaxOrderElt(0, -(pi.inverse())), MaxOrderElt(Q(1, p), zero)],
    ]


def example_dim2_true_inverse(p: int) -> list:
    """Componentwise inverse of the example Gram in S + T."""
    pi = Cyclo.pi(p)
    zero = Cyclo.from_int(0, p)
    return [
        [MaxOrderElt(Q(1, p), zero), MaxOrderElt(0, pi.conj().inverse())],
        [MaxOrderElt(0, pi.inverse()), MaxOrderElt(Q(1, p), zero)],
    ]


def example_dim2(p: int) -> FormedLattice:
    return hermitian_to_bilinear(example_dim2_gram(p), p)


__all__ = [
    "FormedLattice",
    "JordanSplit",
    "bilinear_to_hermitian",
    "hermitian_to_bilinear",
    "is_conjugate_symmetric",
    "standard_r_basis",
    "dual_of",
    "is_integral",
    "is_unimodular",
    "is_modular",
    "is_elementary",
    "integrality_witness",
    "modularity_witness",
    "elementary_witness",
    "hermitian_dual_basis",
    "base_change_matrix",
    "to_components",
    "projection_split",
    "verify_jordan",
    "jordan_split",
    "example_dim2",
    "example_dim2_gram",
    "example_dim2_reference_inverse",
    "example_dim2_true_inverse",
]
