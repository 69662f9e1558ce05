"""Z_(p) C_p-module structure of sigma-stable lattices.

Every finitely generated R-lattice is R^a + T^b + S^c. The multiplicities
are read off from Tate cohomology: dim L^sigma / N L = c and
dim ker N / (sigma - 1) L = b, after which a follows from the rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .arith import Q, check_prime, p_power
from .errors import (
    DimensionMismatch,
    InconsistentType,
    InRadical,
    InternalContradiction,
    NotFree,
    NotSigmaInvariant,
    PreconditionViolated,
    UnsupportedPrime,
)
from .groupring import Cyclo, GroupAlgebraElt, companion_matrix, pi_valuation, regular_matrix
from .plattice import ZpLattice, _smith, lattice_index, smith_local


class SigmaLattice:
    """A Z_(p)-lattice in Q^N stable under an order-p matrix acting on the right."""

    __slots__ = ("lattice", "sigma", "p", "_powers")

    def __init__(self, lattice: ZpLattice, sigma: Sequence[Sequence], *, check: bool = True, _powers=None):
        N = lattice.ambient_dim
        sigma = linalg.as_matrix(sigma)
        if len(sigma) != N or any(len(r) != N for r in sigma):
            raise DimensionMismatch(f"sigma must be {N}x{N}")
        self.lattice = lattice
        self.sigma = sigma
        self.p = lattice.p
        self._powers = _powers
        if check:
            if N and linalg.mat_mul(self.sigma_powers()[-1], sigma) != linalg.identity(N):
                raise NotSigmaInvariant("sigma does not have order dividing p")
            if lattice.image(sigma) != lattice:
                raise NotSigmaInvariant("the lattice is not sigma-stable")

    @property
    def ambient_dim(self) -> int:
        return self.lattice.ambient_dim

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def basis(self) -> list:
        return self.lattice.basis

    def sigma_powers(self) -> list:
        if self._powers is None:
            N = self.ambient_dim
            pw = [linalg.identity(N)]
            for _ in range(self.p - 1):
                pw.append(linalg.mat_mul(pw[-1], self.sigma))
            self._powers = pw
        return self._powers

    def __eq__(self, other):
        if not isinstance(other, SigmaLattice):
            return NotImplemented
        return self.lattice == other.lattice and self.sigma == other.sigma

    def __repr__(self):
        return f"SigmaLattice(rank={self.rank}, N={self.ambient_dim}, p={self.p})"

    def with_lattice(self, lattice: ZpLattice, check: bool = False) -> "SigmaLattice":
        return SigmaLattice(lattice, self.sigma, check=check, _powers=self.sigma_powers())

    def operator(self, x: GroupAlgebraElt) -> list:
        """Matrix of v -> v * x(sigma)."""
        N = self.ambient_dim
        out = linalg.zeros(N, N)
        for c, S in zip(x.coeffs, self.sigma_powers()):
            if c:
                for i in range(N):
                    for j, s in enumerate(S[i]):
                        if s:
                            out[i][j] += c * s
        return out

    def norm_matrix(self) -> list:
        return self.operator(GroupAlgebraElt.norm_element(self.p))

    def sigma_minus_one(self) -> list:
        N = self.ambient_dim
        return [[self.sigma[i][j] - (1 if i == j else 0) for j in range(N)] for i in range(N)]

    def orbit(self, v: Sequence) -> list:
        return [linalg.vec_mat(v, S) for S in self.sigma_powers()]

    def act(self, v: Sequence, x: GroupAlgebraElt) -> list:
        out = [Q(0)] * self.ambient_dim
        for c, w in zip(x.coeffs, self.orbit(v)):
            if c:
                out = [a + c * b for a, b in zip(out, w)]
        return out

    def r_span(self, vectors: Sequence[Sequence]) -> "SigmaLattice":
        gens = [w for v in vectors for w in self.orbit(v)]
        return self.with_lattice(ZpLattice(gens, self.p, self.ambient_dim))

    def scaled(self, c) -> "SigmaLattice":
        return self.with_lattice(self.lattice.scaled(c))

    def __contains__(self, v):
        return v in self.lattice

    def __le__(self, other: "SigmaLattice"):
        return self.lattice <= other.lattice


@dataclass(frozen=True)
class DecompositionType:
    a: int
    b: int
    c: int

    def as_tuple(self):
        return (self.a, self.b, self.c)

    def rank(self, p: int) -> int:
        return p * self.a + (p - 1) * self.b + self.c


@dataclass
class CompatibleBasisResult:
    basis: list
    t: int

    @property
    def a(self):
        return len(self.basis)


@dataclass
class PseudoBasisResult:
    x_vectors: list = field(default_factory=list)
    n_exponents: list = field(default_factory=list)
    y_vectors: list = field(default_factory=list)
    m_exponents: list = field(default_factory=list)


# -- standard modules -------------------------------------------------------


def block_sigma(p: int, a: int = 0, b: int = 0, c: int = 0) -> list:
    blocks = [regular_matrix(GroupAlgebraElt.sigma(p))] * a + [companion_matrix(p)] * b + [[[1]]] * c
    if not blocks:
        return []
    return linalg.block_diag(blocks)


def block_lattice(p: int, a: int = 0, b: int = 0, c: int = 0) -> SigmaLattice:
    """The standard lattice R^a + T^b + S^c with block-diagonal sigma."""
    check_prime(p)
    N = p * a + (p - 1) * b + c
    return SigmaLattice(ZpLattice.standard(N, p), block_sigma(p, a, b, c), check=False)


def regular_lattice(p: int, a: int = 1) -> SigmaLattice:
    return block_lattice(p, a=a)


# -- invariants -------------------------------------------------------------


def fixed_sublattice(L: SigmaLattice) -> ZpLattice:
    return L.lattice.kernel(L.sigma_minus_one())


def norm_image(L: SigmaLattice) -> ZpLattice:
    return L.lattice.image(L.norm_matrix())


def norm_kernel(L: SigmaLattice) -> ZpLattice:
    return L.lattice.kernel(L.norm_matrix())


def augmentation_image(L: SigmaLattice) -> ZpLattice:
    """(sigma - 1) L."""
    return L.lattice.image(L.sigma_minus_one())


def tate_dimensions(L: SigmaLattice) -> tuple:
    """(dim H^0, dim H^1) over F_p of the Tate cohomology of <sigma> on L."""
    h0 = lattice_index(fixed_sublattice(L), norm_image(L))
    h1 = lattice_index(norm_kernel(L), augmentation_image(L))
    return h0, h1


def decomposition_type(L: SigmaLattice) -> DecompositionType:
    c, b = tate_dimensions(L)
    p = L.p
    rest = L.rank - (p - 1) * b - c
    if rest < 0 or rest % p:
        raise InconsistentType(f"rank {L.rank} with b={b}, c={c} leaves {rest}, not a multiple of p={p}")
    return DecompositionType(rest // p, b, c)


def is_free(L: SigmaLattice) -> bool:
    t = decomposition_type(L)
    return t.b == 0 and t.c == 0


def radical_lattice(M: SigmaLattice) -> ZpLattice:
    """J(R) M = p M + (sigma - 1) M."""
    return M.lattice.scaled(M.p) + augmentation_image(M)


def _greedy_residues(start: ZpLattice, candidates: Sequence[Sequence], target_rank_steps: int | None = None):
    """Pick candidates whose classes extend an F_p-basis of a quotient.

    ``start`` must contain p times every candidate, so each accepted vector
    raises the index by exactly one.
    """
    S = start
    chosen = []
    for v in candidates:
        if target_rank_steps is not None and len(chosen) == target_rank_steps:
            break
        if v not in S:
            chosen.append(v)
            S = S + ZpLattice([v], S.p, S.ambient_dim)
    return chosen, S


def r_basis_of_free(L: SigmaLattice) -> list:
    """An R-basis of a free sigma-lattice, lifted from an F_p-basis of L / J(R) L."""
    J = radical_lattice(L)
    gens, S = _greedy_residues(J, L.basis)
    if S != L.lattice:
        raise InternalContradiction("residue classes of a basis fail to span L / J L")
    if L.p * len(gens) != L.rank or L.r_span(gens).lattice != L.lattice:
        raise NotFree(f"{len(gens)} R-generators cannot give a free module of Z_(p)-rank {L.rank}")
    return gens


def split_off_free_summand(M: SigmaLattice, g: Sequence) -> tuple:
    """Split M = R g + M' for g in M outside J(M); M must be free."""
    g = linalg.as_vector(g)
    if g not in M.lattice:
        raise PreconditionViolated("g is not in M")
    J = radical_lattice(M)
    if g in J:
        raise InRadical("g lies in the radical J(M)")
    hs = r_basis_of_free(M)
    start = J + ZpLattice([g], M.p, M.ambient_dim)
    rest, S = _greedy_residues(start, hs)
    if S != M.lattice:
        raise InternalContradiction("completion of g does not span M / J(M)")
    Rg = M.r_span([g])
    Mprime = M.r_span(rest)
    # ranks add up and the sum is M, so the intersection is zero
    if Rg.rank + Mprime.rank != M.rank or (Rg.lattice + Mprime.lattice) != M.lattice:
        raise InternalContradiction("R g + M' is not a direct sum decomposition of M")
    return Rg, Mprime


# -- compatible bases --------------------------------------------------------


def _check_pair(M: SigmaLattice, L: SigmaLattice):
    if M.p != L.p or M.ambient_dim != L.ambient_dim or M.sigma != L.sigma:
        raise PreconditionViolated("M and L must share p, ambient space and sigma")
    if not M.lattice.contains_lattice(L.lattice):
        raise PreconditionViolated("L is not contained in M")
    if not L.lattice.contains_lattice(M.lattice.scaled(M.p)):
        raise PreconditionViolated("pM is not contained in L")


def compatible_basis(M: SigmaLattice, L: SigmaLattice) -> CompatibleBasisResult:
    """R-basis (g_1..g_a) of M and t with (g_1..g_t, p g_{t+1}..p g_a) an R-basis of L.

    Requires M and L free with pM <= L <= M.
    """
    _check_pair(M, L)
    try:
        r_basis_of_free(M)
    except NotFree:
        raise PreconditionViolated("M is not a free R-lattice") from None
    try:
        r_basis_of_free(L)
    except NotFree:
        raise PreconditionViolated("L is not a free R-lattice") from None

    p = M.p
    head = []
    Mc, Lc = M, L
    while Mc.rank:
        J = radical_lattice(Mc)
        lgens = r_basis_of_free(Lc)
        g = next((v for v in lgens if v not in J), None)
        if g is None:
            if Lc.lattice != Mc.lattice.scaled(p):
                raise InternalContradiction("L lies in J(M) but differs from pM")
            break
        _, Mprime = split_off_free_summand(Mc, g)
        Lprime = Lc.with_lattice(Lc.lattice & Mprime.lattice)
        head.append(g)
        Mc, Lc = Mprime, Lprime
    tail = r_basis_of_free(Mc) if Mc.rank else []
    return CompatibleBasisResult(basis=head + tail, t=len(head))


def verify_compatible(M: SigmaLattice, L: SigmaLattice, result: CompatibleBasisResult) -> bool:
    p = M.p
    gs = [linalg.as_vector(g) for g in result.basis]
    a, t = len(gs), result.t
    if not 0 <= t <= a:
        return False
    if p * a != M.rank or M.r_span(gs).lattice != M.lattice:
        return False
    scaled = gs[:t] + [linalg.scale(p, g) for g in gs[t:]]
    if L.r_span(scaled).lattice != L.lattice:
        return False
    try:
        return lattice_index(M.lattice, L.lattice) == p * (a - t)
    except Exception:
        return False


# -- the semisimple case -----------------------------------------------------


def _projector(L: SigmaLattice, which: str) -> list:
    e = L.operator(GroupAlgebraElt([Q(1, L.p)] * L.p, L.p))
    if which == "1":
        return e
    N = L.ambient_dim
    return [[(1 if i == j else 0) - e[i][j] for j in range(N)] for i in range(N)]


def _cyclo_act(L: SigmaLattice, v: Sequence, w: Cyclo) -> list:
    """v * w(sigma) for v in the zeta-isotypic part."""
    return L.act(v, GroupAlgebraElt(w.padded(), L.p))


def t_basis(A: SigmaLattice) -> list:
    """A T-basis of a sigma-lattice on which sigma satisfies the cyclotomic polynomial."""
    rad = augmentation_image(A)  # pi A = (1 - sigma) A
    gens, S = _greedy_residues(rad, A.basis)
    if S != A.lattice:
        raise InternalContradiction("residues fail to span A / pi A")
    return gens


def semisimple_pseudobasis(M: SigmaLattice, L: SigmaLattice) -> PseudoBasisResult:
    """Adapted bases for L <= M when both are T^b + S^c."""
    p = M.p
    if M.sigma != L.sigma or not M.lattice.contains_lattice(L.lattice):
        raise PreconditionViolated("L must be a sigma-sublattice of M")
    tm, tl = decomposition_type(M), decomposition_type(L)
    if tm != tl or tm.a != 0:
        raise PreconditionViolated(f"types must agree and have no free part, got {tm} and {tl}")

    E1 = _projector(M, "1")
    Ez = _projector(M, "zeta")
    Mz, M1 = M.lattice.image(Ez), M.lattice.image(E1)
    Lz, L1 = L.lattice.image(Ez), L.lattice.image(E1)
    if not (M.lattice.contains_lattice(Mz) and M.lattice.contains_lattice(M1)):
        raise InternalContradiction("M does not split along the idempotents")

    result = PseudoBasisResult()
    one, zero = Cyclo.from_int(1, p), Cyclo.from_int(0, p)

    # T-part: elementary divisors over the DVR T
    if tm.b:
        Az = M.with_lattice(Mz)
        xs = t_basis(Az)
        X = [w for x in xs for w in Az.orbit(x)[: p - 1]]
        C = []
        for row in Lz.basis:
            c = linalg.solve_left(X, row)
            C.append([Cyclo(c[i * (p - 1):(i + 1) * (p - 1)], p) for i in range(len(xs))])
        pi = Cyclo.pi(p)
        exps, _, _, Vinv = _smith(C, pi_valuation, lambda x, k: x / pi**k, one, zero)
        new = []
        for row in Vinv:
            v = [Q(0)] * M.ambient_dim
            for w, x in zip(row, xs):
                if w:
                    v = linalg.add(v, _cyclo_act(Az, x, w))
            new.append(v)
        result.x_vectors, result.n_exponents = new, exps

    # S-part: elementary divisors over Z_(p)
    if tm.c:
        ys = M1.basis
        C = [M1.coordinates(row) for row in L1.basis]
        exps, _, _, Vinv = smith_local(C, p)
        result.y_vectors = [linalg.vec_mat(row, ys) for row in Vinv]
        result.m_exponents = exps

    if not verify_pseudobasis(M, L, result):
        raise InternalContradiction("pseudo-basis verification failed")
    return result


def verify_pseudobasis(M: SigmaLattice, L: SigmaLattice, res: PseudoBasisResult) -> bool:
    p = M.p
    pi = Cyclo.pi(p)
    mg, lg = [], []
    for x, n in zip(res.x_vectors, res.n_exponents):
        orbit = M.orbit(x)[: p - 1]
        mg += orbit
        lg += [_cyclo_act(M, v, pi**n) for v in orbit]
    for y, m in zip(res.y_vectors, res.m_exponents):
        mg.append(y)
        lg.append(linalg.scale(p_power(m, p), y))
    if len(mg) != M.rank:
        return False
    ok_m = ZpLattice(mg, p, M.ambient_dim) == M.lattice if mg else M.rank == 0
    ok_l = ZpLattice(lg, p, M.ambient_dim) == L.lattice if lg else L.rank == 0
    ordered = res.n_exponents == sorted(res.n_exponents) and res.m_exponents == sorted(res.m_exponents)
    return ok_m and ok_l and ordered


# -- the mixed-type counterexample ------------------------------------------


def counterexample_pair(p: int) -> tuple:
    """M = R x + S y and L = R(p x e_1) + R(x(1 - sigma) + y)."""
    check_prime(p)
    M = block_lattice(p, a=1, c=1)
    N = p + 1
    x = [Q(int(i == 0)) for i in range(N)]
    y = [Q(int(i == p)) for i in range(N)]
    pxe1 = M.act(x, GroupAlgebraElt.norm_element(p))
    w = linalg.add(M.act(x, GroupAlgebraElt.one(p) - GroupAlgebraElt.sigma(p)), y)
    L = M.r_span([pxe1, w])
    return M, L, {"x": x, "y": y, "generators": [pxe1, w]}


def verify_counterexample(p: int) -> dict:
    if p == 2:
        raise UnsupportedPrime("the construction is only claimed for p > 2")
    M, L, _ = counterexample_pair(p)
    type_M = decomposition_type(M)
    type_L = decomposition_type(L)
    between = L.lattice.contains_lattice(M.lattice.scaled(p)) and M.lattice.contains_lattice(L.lattice)
    index = lattice_index(M.lattice, L.lattice) if between else None
    return {
        "p": p,
        "type_M": type_M.as_tuple(),
        "type_L": type_L.as_tuple(),
        "pM_in_L_in_M": between,
        "index_exponent": index,
        "ok": type_M.as_tuple() == (1, 0, 1) and type_L.as_tuple() == (1, 0, 1) and between and index == 2,
    }


# -- finite enumeration -----------------------------------------------------


def _rref_mod(rows: Sequence[Sequence[int]], p: int) -> tuple:
    M = [[x % p for x in r] for r in rows]
    out = []
    ncols = len(M[0]) if M else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    out = tuple(tuple(row) for row in M[:r])
    return out


def intermediate_sublattices(M: SigmaLattice) -> list:
    """Every sigma-stable lattice L with pM <= L <= M, by enumerating F_p[sigma]-submodules of M / pM."""
    p = M.p
    n = M.rank
    B = M.basis
    # sigma on M / pM in the basis B
    S = []
    for row in B:
        c = M.lattice.coordinates(linalg.vec_mat(row, M.sigma))
        S.append([int(x.numerator * pow(x.denominator, -1, p) % p) for x in c])

    def cyclic(v):
        vecs = [list(v)]
        for _ in range(p - 1):
            w = vecs[-1]
            vecs.append([sum(w[i] * S[i][j] for i in range(n)) % p for j in range(n)])
        return _rref_mod(vecs, p)

    subs = {()}
    for v in itertools.product(range(p), repeat=n):
        subs.add(cyclic(v))
    frontier = set(subs)
    while frontier:
        new = set()
        for U in frontier:
            for W in list(subs):
                s = _rref_mod(list(U) + list(W), p)
                if s not in subs:
                    new.add(s)
        subs |= new
        frontier = new
    pM = M.lattice.scaled(p)
    out = []
    for U in sorted(subs, key=lambda u: (len(u), u)):
        lifts = [linalg.vec_mat(list(map(Q, u)), B) for u in U]
        out.append(M.with_lattice(pM + ZpLattice(lifts, p, M.ambient_dim) if lifts else pM))
    return out


__all__ = [
    "SigmaLattice",
    "DecompositionType",
    "CompatibleBasisResult",
    "PseudoBasisResult",
    "block_lattice",
    "block_sigma",
    "regular_lattice",
    "fixed_sublattice",
    "norm_image",
    "tate_dimensions",
    "decomposition_type",
    "is_free",
    "radical_lattice",
    "r_basis_of_free",
    "split_off_free_summand",
    "compatible_basis",
    "verify_compatible",
    "t_basis",
    "semisimple_pseudobasis",
    "verify_pseudobasis",
    "counterexample_pair",
    "verify_counterexample",
    "intermediate_sublattices",
]
