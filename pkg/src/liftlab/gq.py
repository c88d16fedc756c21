"""Exact Gaussian rationals.

A value is stored as three integers ``(a, b, d)`` meaning ``(a + b*i) / d``
with ``d > 0`` and ``gcd(a, b, d) == 1``.  The normal form makes equality
and hashing structural.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["GaussianRational", "GQ", "as_gq", "ZERO", "ONE", "I"]

_HASH_MODULUS = sys.hash_info.modulus


def _make(a: int, b: int, d: int) -> "GaussianRational":
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(a, b, d)
    if g != 1:
        a //= g
        b //= g
        d //= g
    obj = object.__new__(GaussianRational)
    obj._a = a
    obj._b = b
    obj._d = d
    return obj


class GaussianRational:
    __slots__ = ("_a", "_b", "_d")

    def __new__(cls, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        return _make(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    # -- accessors -----------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._d == 1

    def conjugate(self) -> "GaussianRational":
        return _make(self._a, -self._b, self._d)

    def sort_key(self) -> tuple:
        return (Fraction(self._a, self._d), Fraction(self._b, self._d))

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __int__(self) -> int:
        if self._b or self._d != 1:
            raise ValueError(f"{self} is not an integer")
        return self._a

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return _make(self._a + other._a, self._b + other._b, d1)
        return _make(self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return _make(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return _make(a1 * a2, 0, self._d * other._d)
        return _make(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        if a == 0 and b == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        n = a * a + b * b
        return _make(a * d, -b * d, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self == other

    def __hash__(self):
        if self._b:
            return hash((self._a, self._b, self._d))
        if self._d == 1:
            return hash(self._a)
        # same value as hash(Fraction(a, d)) without building the Fraction
        try:
            dinv = pow(self._d, -1, _HASH_MODULUS)
        except ValueError:
            h = sys.hash_info.inf
        else:
            h = hash(hash(abs(self._a)) * dinv)
        h = h if self._a >= 0 else -h
        return -2 if h == -1 else h

    def __bool__(self):
        return not (self._a == 0 and self._b == 0)

    # -- text ------------------------------------------------------------
    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return _fmt_q(re)
        if re == 0:
            return _fmt_im(im)
        sign = "+" if im > 0 else "-"
        return f"{_fmt_q(re)}{sign}{_fmt_im(abs(im))}"

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))


def _fmt_q(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmt_im(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    if q.denominator == 1:
        return f"{q.numerator}*i"
    return f"{q.numerator}/{q.denominator}*i"


def _coerce(value):
    if isinstance(value, int):
        return _make(value, 0, 1)
    if isinstance(value, Rational):
        return _make(value.numerator, 0, value.denominator)
    if isinstance(value, complex):
        return GaussianRational(Fraction(value.real), Fraction(value.imag))
    return None


def as_gq(value) -> GaussianRational:
    """Coerce ints, Fractions, Gaussian rationals and strings like ``'1/2+i'``."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, str):
        from .expoly import parse_constant

        return parse_constant(value)
    out = _coerce(value)
    if out is None:
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")
    return out


GQ = GaussianRational
ZERO = _make(0, 0, 1)
ONE = _make(1, 0, 1)
I = _make(0, 1, 1)
