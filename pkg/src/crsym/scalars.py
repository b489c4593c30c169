"""Exact scalars: rationals and Gaussian rationals.

Rationals are ``gmpy2.mpq`` values (always in lowest terms with a positive
denominator).  :class:`GaussianRational` is an immutable pair of them.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

import gmpy2

Rational = type(gmpy2.mpq(0))


def Q(x, den=None) -> Rational:
    """Coerce an int, Fraction, mpq or decimal-free string to a rational."""
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return gmpy2.mpq(x, den)
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        return gmpy2.mpq(int(x))
    if isinstance(x, (int, str)):
        return gmpy2.mpq(x)
    if isinstance(x, (Fraction, _RationalABC)):
        return gmpy2.mpq(x.numerator, x.denominator)
    if isinstance(x, type(gmpy2.mpz(0))):
        return gmpy2.mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


_ZERO = gmpy2.mpq(0)
_ONE = gmpy2.mpq(1)


def format_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Q(re))
        object.__setattr__(self, "im", Q(im))

    @classmethod
    def _raw(cls, re, im):
        # trusted fast path: both parts already mpq
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex numbers are not exact")
        return cls._raw(Q(x), _ZERO)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (Fraction(int(self.re.numerator), int(self.re.denominator)),
                                   Fraction(int(self.im.numerator), int(self.im.denominator))))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.norm_sq()
        if not n:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

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

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm_sq(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        """Canonical text, re-readable by the expression parser.

        Real values print as ``3`` or ``-3/2``; anything with an imaginary part
        is parenthesised, e.g. ``(1+1/4i)`` or ``(-2i)``.
        """
        if not self.im:
            return format_rational(self.re)
        im = self.im
        mag = format_rational(abs(im))
        im_txt = "i" if mag == "1" else f"{mag}i"
        if not self.re:
            return f"({'-' if im < 0 else ''}{im_txt})"
        return f"({format_rational(self.re)}{'-' if im < 0 else '+'}{im_txt})"


ZERO = GaussianRational._raw(_ZERO, _ZERO)
ONE = GaussianRational._raw(_ONE, _ZERO)
I = GaussianRational._raw(_ZERO, _ONE)


def gr(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


def falling_binomial(a: Rational, n: int) -> Rational:
    """``binomial(a, n)`` for rational ``a`` via the falling factorial."""
    a = Q(a)
    out = _ONE
    for j in range(n):
        out = out * (a - j) / (j + 1)
    return out


def rational_root(q: Rational, n: int) -> Rational | None:
    """Exact positive ``n``-th root of a positive rational, or ``None``."""
    q = Q(q)
    if q <= 0 or n <= 0:
        raise ValueError("rational_root needs q > 0 and n > 0")
    num, exact_n = gmpy2.iroot(gmpy2.mpz(q.numerator), n)
    den, exact_d = gmpy2.iroot(gmpy2.mpz(q.denominator), n)
    if exact_n and exact_d:
        return gmpy2.mpq(num, den)
    return None
