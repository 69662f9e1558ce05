"""Dense matrices over Q as lists of lists of exact rationals.

Row-vector convention throughout: a vector v is a list, v * A is ``vec_mat``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .arith import Q, Rational
from .errors import DegenerateForm

Matrix = list  # list[list[Q]]
Vector = list  # list[Q]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Q(x) for x in row] for row in rows]


def as_vector(v: Iterable) -> Vector:
    return [Q(x) for x in v]


def identity(n: int) -> Matrix:
    return [[Q(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[Q(0)] * n for _ in range(m)]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*A)]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum((a * b for a, b in zip(row, col) if a and b), Q(0)) for col in Bt] for row in A]


def vec_mat(v: Sequence, A: Sequence[Sequence]) -> Vector:
    n = len(A[0]) if A else 0
    out = [Q(0)] * n
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] += x * a
    return out


def dot(u: Sequence, v: Sequence) -> Rational:
    return sum((a * b for a, b in zip(u, v) if a and b), Q(0))


def scale(c, v: Sequence) -> Vector:
    return [c * x for x in v]


def add(u: Sequence, v: Sequence) -> Vector:
    return [a + b for a, b in zip(u, v)]


def sub(u: Sequence, v: Sequence) -> Vector:
    return [a - b for a, b in zip(u, v)]


def mat_pow(A: Matrix, k: int) -> Matrix:
    out = identity(len(A))
    for _ in range(k):
        out = mat_mul(out, A)
    return out


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = Q(x)
        off += len(b)
    return out


def det(A: Sequence[Sequence]) -> Rational:
    M = [list(map(Q, row)) for row in A]
    n = len(M)
    d = Q(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return Q(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return d


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    M = [list(map(Q, row)) + [Q(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise DegenerateForm("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def rank(A: Sequence[Sequence]) -> int:
    M = [list(map(Q, row)) for row in A]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def solve_left(A: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Some x with x * A = b, or None when b is outside the row space of A."""
    m = len(A)
    n = len(b)
    # Solve A^T x^T = b^T by elimination on the augmented system.
    M = [[Q(A[i][j]) for i in range(m)] + [Q(b[j])] for j in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][m] for i in range(r, n)):
        return None
    x = [Q(0)] * m
    for i, c in enumerate(pivots):
        x[c] = M[i][m]
    return x
