"""Exact linear algebra over Z_(p) and lattices in Q^N.

Lattices are row spans. Every :class:`ZpLattice` stores its basis in the
canonical p-local Hermite normal form produced by :func:`hnf_local`, so two
lattices are equal exactly when their stored bases are equal.

Long normal-form computations poll a cancellation token at row-operation
granularity; see :func:`cancellation`.
"""

from __future__ import annotations

import contextlib
import contextvars
from typing import Iterable, Sequence

from . import linalg
from .arith import Q, canonical_rep, check_prime, is_p_local, p_power, unit_part, vp
from .errors import Cancelled, DegenerateForm, DimensionMismatch, NotSublattice, PrimeMismatch

_cancel_token: contextvars.ContextVar = contextvars.ContextVar("zpcp_cancel", default=None)


@contextlib.contextmanager
def cancellation(token):
    """Run a block with ``token`` polled during normal forms.

    ``token`` is anything with an ``is_set()`` method (e.g. threading.Event).
    Once it is set, the next row operation raises :class:`Cancelled`.
    """
    reset = _cancel_token.set(token)
    try:
        yield token
    finally:
        _cancel_token.reset(reset)


def _checkpoint():
    tok = _cancel_token.get()
    if tok is not None and tok.is_set():
        raise Cancelled("normal form computation cancelled")


def hnf_local(M: Sequence[Sequence], p: int) -> list:
    """Canonical row Hermite normal form over Z_(p); zero rows are dropped.

    Pivots are exact powers p^k (k may be negative for rational input), the
    entries below a pivot vanish and the entries above a pivot p^k are the
    canonical representatives of their class modulo p^k Z_(p).
    """
    A = [list(map(Q, row)) for row in M]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    pivots = []
    for j in range(n):
        if r == m:
            break
        best, bv = None, None
        for i in range(r, m):
            x = A[i][j]
            if x:
                v = vp(x, p)
                if best is None or v < bv:
                    best, bv = i, v
        if best is None:
            continue
        _checkpoint()
        A[r], A[best] = A[best], A[r]
        u = unit_part(A[r][j], p)
        if u != 1:
            A[r] = [x / u for x in A[r]]
        pr = A[r]
        piv = pr[j]
        for i in range(r + 1, m):
            x = A[i][j]
            if x:
                c = x / piv
                A[i] = [a - c * b if b else a for a, b in zip(A[i], pr)]
        pivots.append((r, j, bv))
        r += 1
    for (pr_i, j, k) in pivots:
        pr = A[pr_i]
        piv = pr[j]
        for i in range(pr_i):
            e = A[i][j]
            if e:
                rep = canonical_rep(e, k, p)
                q = (e - rep) / piv
                if q:
                    A[i] = [a - q * b if b else a for a, b in zip(A[i], pr)]
    return A[:r]


def _smith(A, val, unit_of, one, zero):
    """Diagonalize A over a discrete valuation ring.

    Returns (exponents, U, V, Vinv) with U * A * V diagonal, pivots exact
    uniformizer powers, exponents non-decreasing.
    """
    A = [list(row) for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    Vinv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    exps = []
    for r in range(min(m, n)):
        best = None
        for i in range(r, m):
            for j in range(r, n):
                x = A[i][j]
                if x:
                    v = val(x)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        _checkpoint()
        k, bi, bj = best
        A[r], A[bi] = A[bi], A[r]
        U[r], U[bi] = U[bi], U[r]
        if bj != r:
            for row in A:
                row[r], row[bj] = row[bj], row[r]
            for row in V:
                row[r], row[bj] = row[bj], row[r]
            Vinv[r], Vinv[bj] = Vinv[bj], Vinv[r]
        u = unit_of(A[r][r], k)
        if u != one:
            uinv = one / u
            A[r] = [x * uinv for x in A[r]]
            U[r] = [x * uinv for x in U[r]]
        piv = A[r][r]
        for i in range(r + 1, m):
            x = A[i][r]
            if x:
                c = x / piv
                A[i] = [a - c * b for a, b in zip(A[i], A[r])]
                U[i] = [a - c * b for a, b in zip(U[i], U[r])]
        for j in range(r + 1, n):
            x = A[r][j]
            if x:
                c = x / piv
                A[r][j] = zero
                for row in V:
                    row[j] = row[j] - c * row[r]
                Vinv[r] = [a + c * b for a, b in zip(Vinv[r], Vinv[j])]
        exps.append(k)
    return exps, U, V, Vinv


def smith_local(M: Sequence[Sequence], p: int):
    """Smith form over Z_(p): (exponents, U, V, V^-1) with U M V = diag(p^k_i)."""
    A = [list(map(Q, row)) for row in M]
    return _smith(
        A,
        lambda x: vp(x, p),
        lambda x, k: x / p_power(k, p),
        Q(1),
        Q(0),
    )


def snf_local(M: Sequence[Sequence], p: int) -> list:
    """Elementary divisor exponents k_1 <= ... <= k_r of M over Z_(p)."""
    return smith_local(M, p)[0]


def left_kernel_local(M: Sequence[Sequence], p: int) -> list:
    """A Z_(p)-basis of {x in Z_(p)^m : x M = 0}, saturated in Z_(p)^m."""
    m = len(M)
    if m == 0:
        return []
    n = len(M[0])
    aug = [list(map(Q, row)) + [Q(int(i == j)) for j in range(m)] for i, row in enumerate(M)]
    H = hnf_local(aug, p)
    return [row[n:] for row in H if not any(row[:n])]


class ZpLattice:
    """A Z_(p)-lattice (not necessarily of full rank) in Q^N."""

    __slots__ = ("basis", "p", "ambient_dim", "_pivots")

    def __init__(self, generators: Iterable[Sequence], p: int, ambient_dim: int | None = None, *, _hnf=False):
        gens = [list(map(Q, g)) for g in generators]
        if ambient_dim is None:
            if not gens:
                raise ValueError("ambient_dim is required for an empty generating set")
            ambient_dim = len(gens[0])
        for g in gens:
            if len(g) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(g)} in Q^{ambient_dim}")
        self.p = p
        self.ambient_dim = ambient_dim
        self.basis = gens if _hnf else hnf_local(gens, p)
        self._pivots = [next(j for j, x in enumerate(row) if x) for row in self.basis]

    @classmethod
    def standard(cls, n: int, p: int) -> "ZpLattice":
        return cls(linalg.identity(n), p, n, _hnf=True)

    @classmethod
    def zero(cls, n: int, p: int) -> "ZpLattice":
        return cls([], p, n, _hnf=True)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def _same_space(self, other: "ZpLattice"):
        if other.p != self.p:
            raise PrimeMismatch(f"lattices over Z_({self.p}) and Z_({other.p})")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"Q^{self.ambient_dim} vs Q^{other.ambient_dim}")

    def __eq__(self, other):
        if not isinstance(other, ZpLattice):
            return NotImplemented
        return self.p == other.p and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.p, self.ambient_dim, tuple(map(tuple, self.basis))))

    def __repr__(self):
        return f"ZpLattice(rank={self.rank}, N={self.ambient_dim}, p={self.p})"

    def coordinates(self, v: Sequence) -> list | None:
        """Rational coordinates of v in the stored basis, or None if v is outside the Q-span."""
        w = list(map(Q, v))
        coords = []
        for row, j in zip(self.basis, self._pivots):
            c = w[j] / row[j]
            coords.append(c)
            if c:
                w = [a - c * b if b else a for a, b in zip(w, row)]
        if any(w):
            return None
        return coords

    def __contains__(self, v: Sequence) -> bool:
        c = self.coordinates(v)
        return c is not None and all(x.denominator % self.p for x in c)

    def contains_lattice(self, other: "ZpLattice") -> bool:
        self._same_space(other)
        return all(row in self for row in other.basis)

    __ge__ = contains_lattice

    def __le__(self, other: "ZpLattice") -> bool:
        return other.contains_lattice(self)

    def __add__(self, other: "ZpLattice") -> "ZpLattice":
        self._same_space(other)
        return ZpLattice(self.basis + other.basis, self.p, self.ambient_dim)

    def __and__(self, other: "ZpLattice") -> "ZpLattice":
        self._same_space(other)
        if not self.basis or not other.basis:
            return ZpLattice.zero(self.ambient_dim, self.p)
        K = left_kernel_local(self.basis + other.basis, self.p)
        k = self.rank
        gens = [linalg.vec_mat(x[:k], self.basis) for x in K]
        return ZpLattice(gens, self.p, self.ambient_dim)

    def scaled(self, c) -> "ZpLattice":
        c = Q(c)
        return ZpLattice([[c * x for x in row] for row in self.basis], self.p, self.ambient_dim)

    def image(self, A: Sequence[Sequence]) -> "ZpLattice":
        """Lattice spanned by the rows of basis * A."""
        n = len(A[0]) if A else 0
        return ZpLattice(linalg.mat_mul(self.basis, A) if self.basis else [], self.p, n)

    def kernel(self, A: Sequence[Sequence]) -> "ZpLattice":
        """{x in self : x * A = 0}."""
        if not self.basis:
            return self
        K = left_kernel_local(linalg.mat_mul(self.basis, A), self.p)
        return ZpLattice([linalg.vec_mat(c, self.basis) for c in K], self.p, self.ambient_dim)

    def gram(self, form: Sequence[Sequence]) -> list:
        return linalg.mat_mul(linalg.mat_mul(self.basis, form), linalg.transpose(self.basis))

    def in_span(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None


def lattice_sum(A: ZpLattice, B: ZpLattice) -> ZpLattice:
    return A + B


def lattice_intersection(A: ZpLattice, B: ZpLattice) -> ZpLattice:
    return A & B


def lattice_member(v: Sequence, L: ZpLattice) -> bool:
    if len(v) != L.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in Q^{L.ambient_dim}")
    return v in L


def lattice_index(L: ZpLattice, Lsub: ZpLattice) -> int:
    """k with [L : Lsub] = p^k.

    Equal to the sum of the Smith exponents of the coordinate matrix of Lsub
    in L, i.e. the valuation of its determinant.
    """
    L._same_space(Lsub)
    if L.rank != Lsub.rank:
        raise NotSublattice(f"ranks differ: {L.rank} vs {Lsub.rank}")
    C = []
    for row in Lsub.basis:
        c = L.coordinates(row)
        if c is None or not all(is_p_local(x, L.p) for x in c):
            raise NotSublattice("not contained in the ambient lattice")
        C.append(c)
    if not C:
        return 0
    return vp(linalg.det(C), L.p)


def dual_lattice(L: ZpLattice, form: Sequence[Sequence]) -> ZpLattice:
    """Dual of L inside its Q-span: {x in QL : B(x, l) in Z_(p) for all l in L}."""
    if len(form) != L.ambient_dim:
        raise DimensionMismatch("form does not match the ambient dimension")
    if not L.basis:
        return L
    G = L.gram(form)
    try:
        Ginv = linalg.inverse(G)
    except DegenerateForm:
        raise DegenerateForm("the form is degenerate on the span of the lattice") from None
    return ZpLattice(linalg.mat_mul(Ginv, L.basis), L.p, L.ambient_dim)


def lattice_from_rows(rows: Sequence[Sequence], p: int, ambient_dim: int | None = None) -> ZpLattice:
    check_prime(p)
    return ZpLattice(rows, p, ambient_dim)


def is_unimodular_over_local(U: Sequence[Sequence], p: int) -> bool:
    """True iff U is square with p-local entries and p-unit determinant."""
    if any(len(row) != len(U) for row in U):
        return False
    if not all(is_p_local(x, p) for row in U for x in row):
        return False
    d = linalg.det(U)
    return d != 0 and vp(d, p) == 0


__all__ = [
    "hnf_local",
    "snf_local",
    "smith_local",
    "left_kernel_local",
    "ZpLattice",
    "lattice_sum",
    "lattice_intersection",
    "lattice_member",
    "lattice_index",
    "dual_lattice",
    "cancellation",
    "is_unimodular_over_local",
]
