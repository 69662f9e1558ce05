"""Exact arithmetic in Q and in the localization Z_(p).

Rationals are ``gmpy2.mpq`` values, exported here as :data:`Q`. They are
already canonical (reduced, positive denominator, zero is 0/1), so no wrapper
is needed for Q. :class:`PLocal` pins a rational to a prime and refuses values with p in
the denominator.
"""

from __future__ import annotations

import math
import numbers
from functools import total_ordering
from typing import Union

import gmpy2

from .errors import NotPLocal, PrimeMismatch

Q = gmpy2.mpq
Rational = type(Q(0))
RationalLike = Union[int, Rational, str]

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def is_scalar(x) -> bool:
    """Exact rational scalar (int, Fraction, mpq), excluding bool."""
    return isinstance(x, numbers.Rational) and not isinstance(x, bool)


def to_rational(x: RationalLike) -> Rational:
    if isinstance(x, Rational):
        return x
    if isinstance(x, PLocal):
        return x.value
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean value {x!r}")
    return Q(x)


def _vp_int(n: int, p: int) -> int:
    return gmpy2.remove(n, p)[1]


def vp(x: RationalLike, p: int) -> float | int:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = to_rational(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def is_p_local(x: RationalLike, p: int) -> bool:
    x = to_rational(x)
    return x.denominator % p != 0


def p_power(k: int, p: int) -> Rational:
    """p**k as an exact rational, valid for negative k."""
    return Q(p**k) if k >= 0 else Q(1, p ** (-k))


def unit_part(x: Rational, p: int) -> Rational:
    """The p-unit u with x = u * p**vp(x)."""
    return x / p_power(vp(x, p), p)


def residue(x: RationalLike, p: int, k: int = 1) -> int:
    """Image of a p-local rational in Z/p^k, as an integer in [0, p^k)."""
    x = to_rational(x)
    if x.denominator % p == 0:
        raise NotPLocal(f"{x} is not in Z_({p})")
    m = p**k
    return int(x.numerator) * pow(int(x.denominator), -1, m) % m


def canonical_rep(e: Rational, k: int, p: int) -> Rational:
    """Canonical representative of the coset e + p^k Z_(p) in Q.

    For p-local e and k >= 0 this is the integer in [0, p^k) congruent to e.
    In general it is p^k * c / p^m with 0 <= c < p^m, where e / p^k has
    valuation -m < 0, and 0 when e / p^k is p-local.
    """
    f = e / p_power(k, p)
    if f.denominator % p != 0:
        return Q(0)
    m = _vp_int(f.denominator, p)
    pm = p**m
    b = int(f.denominator) // pm
    c = int(f.numerator) * pow(b, -1, pm) % pm
    return Q(c, pm) * p_power(k, p)


def format_rational(x: RationalLike) -> str:
    x = to_rational(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def parse_rational(s: str | int) -> Rational:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValueError(f"expected a rational string, got {s!r}")
    if isinstance(s, int):
        return Q(s)
    s = s.strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError(f"malformed rational {s!r}")
    try:
        return Q(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {s!r}") from None


def parse_p_local(s: str | int, p: int) -> Rational:
    x = parse_rational(s)
    if not is_p_local(x, p):
        raise NotPLocal(f"{s!r} has {p} in its denominator")
    return x


@total_ordering
class PLocal:
    """An element of Z_(p): a rational whose denominator is prime to p."""

    __slots__ = ("value", "p")

    def __init__(self, value: RationalLike, p: int):
        value = to_rational(value)
        if value.denominator % p == 0:
            raise NotPLocal(f"{value} is not in Z_({p})")
        self.value = value
        self.p = p

    def _coerce(self, other) -> Rational:
        if isinstance(other, PLocal):
            if other.p != self.p:
                raise PrimeMismatch(f"cannot mix p={self.p} and p={other.p}")
            return other.value
        if is_scalar(other):
            return Q(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PLocal(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PLocal(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PLocal(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PLocal(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # raises NotPLocal unless the divisor is a p-unit (or the quotient happens to be local)
        return PLocal(self.value / o, self.p)

    def __neg__(self):
        return PLocal(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, PLocal):
            return self.p == other.p and self.value == other.value
        if is_scalar(other):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.value < o

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"PLocal({format_rational(self.value)}, p={self.p})"

    def valuation(self):
        return vp(self.value, self.p)

    def is_unit(self) -> bool:
        return self.valuation() == 0


def is_p_unit(x: PLocal) -> bool:
    return x.is_unit()
