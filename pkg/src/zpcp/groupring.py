"""The group ring R = Z_(p) C_p, the algebra Q C_p and the maximal order S + T.

Elements of Q C_p are coefficient tuples on the basis sigma^0, ..., sigma^(p-1).
The Wedderburn components are s = augmentation (sigma -> 1) and
t = image under sigma -> zeta, stored in the power basis zeta^0..zeta^(p-2).
R sits inside S + T as the fibre product {(s, t) : s = t mod the radical}.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .arith import Q, Rational, is_scalar, INF, RationalLike, format_rational, is_p_local, p_power, residue, to_rational, vp
from .errors import NotInR, NotPLocal, PrimeMismatch


def _fr(xs: Iterable) -> tuple:
    return tuple(to_rational(x) for x in xs)


def _cyclic_mul(a: Sequence, b: Sequence, p: int) -> list:
    out = [Q(0)] * p
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % p] += x * y
    return out


class GroupAlgebraElt:
    """Element of Q C_p."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Iterable[RationalLike], p: int):
        c = _fr(coeffs)
        if len(c) != p:
            raise ValueError(f"expected {p} coefficients, got {len(c)}")
        self.coeffs = c
        self.p = p

    @classmethod
    def zero(cls, p):
        return cls([0] * p, p)

    @classmethod
    def one(cls, p):
        return cls([1] + [0] * (p - 1), p)

    @classmethod
    def scalar(cls, x, p):
        return cls([x] + [0] * (p - 1), p)

    @classmethod
    def sigma(cls, p, k=1):
        c = [0] * p
        c[k % p] = 1
        return cls(c, p)

    @classmethod
    def norm_element(cls, p):
        """1 + sigma + ... + sigma^(p-1) = p e_1."""
        return cls([1] * p, p)

    def _peer(self, other) -> type:
        if not isinstance(other, GroupAlgebraElt):
            return None
        if other.p != self.p:
            raise PrimeMismatch(f"cannot mix p={self.p} and p={other.p}")
        if isinstance(self, GroupRingElt) and isinstance(other, GroupRingElt):
            return GroupRingElt
        return GroupAlgebraElt

    def __add__(self, other):
        if is_scalar(other):
            other = type(self).scalar(other, self.p) if is_p_local(other, self.p) else GroupAlgebraElt.scalar(other, self.p)
        cls = self._peer(other)
        if cls is None:
            return NotImplemented
        return cls([a + b for a, b in zip(self.coeffs, other.coeffs)], self.p)

    __radd__ = __add__

    def __neg__(self):
        return type(self)([-a for a in self.coeffs], self.p)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_scalar(other):
            other = Q(other)
            cls = type(self) if is_p_local(other, self.p) else GroupAlgebraElt
            return cls([a * other for a in self.coeffs], self.p)
        cls = self._peer(other)
        if cls is None:
            return NotImplemented
        return cls(_cyclic_mul(self.coeffs, other.coeffs, self.p), self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = type(self).one(self.p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GroupAlgebraElt):
            return self.p == other.p and self.coeffs == other.coeffs
        if is_scalar(other):
            return self.coeffs == GroupAlgebraElt.scalar(other, self.p).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __repr__(self):
        name = type(self).__name__
        return f"{name}([{', '.join(map(format_rational, self.coeffs))}], p={self.p})"

    def __bool__(self):
        return any(self.coeffs)

    def involution(self):
        p = self.p
        return type(self)([self.coeffs[(p - i) % p] for i in range(p)], p)

    def augmentation(self) -> Rational:
        return sum(self.coeffs, Q(0))

    def trace_reg(self) -> Rational:
        return self.p * self.coeffs[0]

    def components(self) -> "MaxOrderElt":
        return components(self)

    def is_integral(self) -> bool:
        return all(is_p_local(c, self.p) for c in self.coeffs)

    def inverse(self) -> "GroupAlgebraElt":
        m = components(self)
        if m.s == 0 or not m.t:
            raise ZeroDivisionError(f"{self!r} is a zero divisor in Q C_{self.p}")
        inv = to_group_algebra(MaxOrderElt(1 / m.s, m.t.inverse()))
        if isinstance(self, GroupRingElt) and inv.is_integral():
            return GroupRingElt(inv.coeffs, self.p)
        return inv

    def to_ring(self) -> "GroupRingElt":
        return GroupRingElt(self.coeffs, self.p)


class GroupRingElt(GroupAlgebraElt):
    """Element of R = Z_(p) C_p: all coefficients p-local."""

    __slots__ = ()

    def __init__(self, coeffs: Iterable[RationalLike], p: int):
        super().__init__(coeffs, p)
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise NotPLocal(f"coefficient {c} is not in Z_({p})")

    def is_unit(self) -> bool:
        return not in_radical(self)


class Cyclo:
    """Element of Q(zeta_p) in the power basis zeta^0, ..., zeta^(p-2)."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Iterable[RationalLike], p: int):
        c = _fr(coeffs)
        if len(c) == p:
            c = _reduce_cyclotomic(list(c), p)
        elif len(c) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(c)}")
        self.coeffs = c
        self.p = p

    @classmethod
    def from_int(cls, x, p):
        return cls([x] + [0] * (p - 2), p)

    @classmethod
    def zeta(cls, p, k=1):
        c = [0] * p
        c[k % p] = 1
        return cls(c, p)

    @classmethod
    def pi(cls, p):
        """The prime element 1 - zeta of T."""
        return cls.from_int(1, p) - cls.zeta(p)

    def padded(self) -> list:
        return list(self.coeffs) + [Q(0)]

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.p != self.p:
                raise PrimeMismatch(f"cannot mix p={self.p} and p={other.p}")
            return other
        if is_scalar(other):
            return Cyclo.from_int(other, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo([a + b for a, b in zip(self.coeffs, o.coeffs)], self.p)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo([-a for a in self.coeffs], self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo([a - b for a, b in zip(self.coeffs, o.coeffs)], self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo(_cyclic_mul(self.padded(), o.padded(), self.p), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclo.from_int(1, self.p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, Cyclo) else other
        if o is None:
            return NotImplemented
        return self.p == o.p and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"Cyclo([{', '.join(map(format_rational, self.coeffs))}], p={self.p})"

    def conj(self) -> "Cyclo":
        """Complex conjugation zeta -> zeta^(-1)."""
        c = self.padded()
        p = self.p
        return Cyclo([c[(p - i) % p] for i in range(p)], p)

    def at_one(self) -> Rational:
        """Sum of power-basis coefficients, the residue map T -> F_p before reduction."""
        return sum(self.coeffs, Q(0))

    def is_integral(self) -> bool:
        return all(is_p_local(c, self.p) for c in self.coeffs)

    def inverse(self) -> "Cyclo":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        p = self.p
        n = p - 1
        # Row i of the multiplication matrix holds the coefficients of self * zeta^i.
        rows = [(self * Cyclo.zeta(p, i)).coeffs for i in range(n)]
        from .linalg import solve_left

        y = solve_left(rows, [1] + [0] * (n - 1))
        return Cyclo(y, p)

    def valuation(self):
        return pi_valuation(self)


def _reduce_cyclotomic(c: list, p: int) -> tuple:
    """Reduce a length-p coefficient list modulo the p-th cyclotomic polynomial."""
    top = c[p - 1]
    return tuple(x - top for x in c[: p - 1])


@lru_cache(maxsize=None)
def _pi_inverse(p: int) -> Cyclo:
    return Cyclo.pi(p).inverse()


def pi_valuation(t: Cyclo):
    """Largest k with t in pi^k T (k may be negative for non-integral t); inf for 0."""
    if not t:
        return INF
    p = t.p
    m = max(0, -min(vp(c, p) for c in t.coeffs if c))
    x = t * p_power(m, p)
    pinv = _pi_inverse(p)
    k = 0
    while True:
        q = x * pinv
        if not q.is_integral():
            break
        x = q
        k += 1
    return k - m * (p - 1)


class MaxOrderElt:
    """A pair (s, t) in Q + Q(zeta_p); S + T when both parts are integral."""

    __slots__ = ("s", "t")

    def __init__(self, s: RationalLike, t: Cyclo):
        self.s = to_rational(s)
        self.t = t

    @property
    def p(self):
        return self.t.p

    def __add__(self, other):
        return MaxOrderElt(self.s + other.s, self.t + other.t)

    def __sub__(self, other):
        return MaxOrderElt(self.s - other.s, self.t - other.t)

    def __neg__(self):
        return MaxOrderElt(-self.s, -self.t)

    def __mul__(self, other):
        if isinstance(other, MaxOrderElt):
            return MaxOrderElt(self.s * other.s, self.t * other.t)
        if is_scalar(other):
            return MaxOrderElt(self.s * other, self.t * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MaxOrderElt):
            return NotImplemented
        return self.s == other.s and self.t == other.t

    def __hash__(self):
        return hash((self.s, self.t))

    def __repr__(self):
        return f"MaxOrderElt({format_rational(self.s)}, {self.t!r})"

    def conj(self):
        return MaxOrderElt(self.s, self.t.conj())

    def inverse(self):
        return MaxOrderElt(1 / self.s, self.t.inverse())

    def is_integral(self) -> bool:
        return is_p_local(self.s, self.p) and self.t.is_integral()


def components(x: GroupAlgebraElt) -> MaxOrderElt:
    """Image of x under Q C_p -> Q + Q(zeta_p), sigma -> (1, zeta)."""
    return MaxOrderElt(x.augmentation(), Cyclo(x.coeffs, x.p))


def to_group_algebra(m: MaxOrderElt) -> GroupAlgebraElt:
    """Inverse of :func:`components` on all of Q + Q(zeta_p)."""
    p = m.p
    t = m.t.padded()
    c = (m.s - m.t.at_one()) / p
    return GroupAlgebraElt([ti + c for ti in t], p)


def is_in_R(m: MaxOrderElt) -> bool:
    p = m.p
    if not m.is_integral():
        return False
    return residue(m.s, p) == residue(m.t.at_one(), p)


def lift_pair(m: MaxOrderElt) -> GroupRingElt:
    if not is_in_R(m):
        raise NotInR(f"{m!r} does not satisfy s = t mod the radical")
    return to_group_algebra(m).to_ring()


def in_radical(x: GroupAlgebraElt) -> bool:
    return vp(x.augmentation(), x.p) >= 1


def involution(x: GroupAlgebraElt) -> GroupAlgebraElt:
    return x.involution()


def trace_reg(x: GroupAlgebraElt) -> Rational:
    return x.trace_reg()


def gr_mul(x: GroupAlgebraElt, y: GroupAlgebraElt) -> GroupAlgebraElt:
    return x * y


def e1(p: int) -> GroupAlgebraElt:
    return GroupAlgebraElt([Q(1, p)] * p, p)


def e_zeta(p: int) -> GroupAlgebraElt:
    return GroupAlgebraElt.one(p) - e1(p)


def regular_matrix(x: GroupAlgebraElt) -> list:
    """Matrix of v -> v * x on row vectors in the basis sigma^0, ..., sigma^(p-1)."""
    p = x.p
    return [[x.coeffs[(m - k) % p] for m in range(p)] for k in range(p)]


def companion_matrix(p: int) -> list:
    """Action of zeta on T in the power basis, row convention."""
    n = p - 1
    M = [[Q(0)] * n for _ in range(n)]
    for i in range(n - 1):
        M[i][i + 1] = Q(1)
    M[n - 1] = [Q(-1)] * n
    return M


def act_matrix(x: GroupAlgebraElt, sigma_powers: Sequence[list]) -> list:
    """Sum_k x_k * sigma^k for a representation given by its sigma powers."""
    n = len(sigma_powers[0])
    out = [[Q(0)] * n for _ in range(n)]
    for c, S in zip(x.coeffs, sigma_powers):
        if c:
            for i in range(n):
                row = out[i]
                for j, a in enumerate(S[i]):
                    if a:
                        row[j] += c * a
    return out


__all__ = [
    "GroupAlgebraElt",
    "GroupRingElt",
    "Cyclo",
    "MaxOrderElt",
    "components",
    "to_group_algebra",
    "lift_pair",
    "is_in_R",
    "in_radical",
    "involution",
    "trace_reg",
    "gr_mul",
    "pi_valuation",
    "e1",
    "e_zeta",
    "regular_matrix",
    "companion_matrix",
    "act_matrix",
]
