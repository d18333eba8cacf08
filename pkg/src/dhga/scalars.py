"""Scalar rings for multivector coefficients.

Two realizations are used throughout the package:

* exact: ``gmpy2.mpq`` for real values and :class:`GaussQ` for values with a
  nonzero imaginary part.  Arithmetic on :class:`GaussQ` demotes the result
  back to ``mpq`` whenever the imaginary part cancels, so real data never pays
  for complex bookkeeping.
* float: Python ``float`` / ``complex``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpq

FLOAT_ATOL = 1e-12
PRUNE_EPS = 1e-14

ZERO = mpq(0)
ONE = mpq(1)

_MPQ_TYPE = type(mpq(0))


class GaussQ:
    """Gaussian rational ``re + im*i`` with ``mpq`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = mpq(re)
        self.im = mpq(im)

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)

    def __hash__(self):
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _MPQ_TYPE, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, GaussQ):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return gauss(self.re + other, self.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussQ):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return gauss(self.re - other, self.im)

    def __rsub__(self, other):
        if isinstance(other, (float, complex)):
            return other - complex(self)
        return gauss(other - self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.re, self.im, other.re, other.im
            return gauss(a * c - b * d, a * d + b * c)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return gauss(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussQ):
            den = other.re * other.re + other.im * other.im
            a, b, c, d = self.re, self.im, other.re, other.im
            return gauss((a * c + b * d) / den, (b * c - a * d) / den)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return gauss(self.re / other, self.im / other)

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return GaussQ(other, 0) / self

    def conjugate(self):
        return GaussQ(self.re, -self.im)


I = GaussQ(0, 1)


def gauss(re, im):
    """Canonical exact scalar: ``mpq`` when ``im == 0``, else :class:`GaussQ`."""
    if im == 0:
        return mpq(re)
    return GaussQ(re, im)


def to_scalar(x):
    """Coerce ints, Fractions, mpq, floats and complex to a ring element."""
    if isinstance(x, GaussQ):
        return gauss(x.re, x.im)
    if isinstance(x, (_MPQ_TYPE, float)):
        return x
    if isinstance(x, complex):
        return x.real if x.imag == 0 else x
    if isinstance(x, (int, Fraction, Rational)):
        return mpq(x)
    if isinstance(x, type(gmpy2.mpfr(0))):
        return float(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as a multivector coefficient")


def is_float(x) -> bool:
    return isinstance(x, (float, complex))


def is_zero(x) -> bool:
    if isinstance(x, (float, complex)):
        return abs(x) < PRUNE_EPS
    return x == 0


def conj(x):
    if isinstance(x, GaussQ):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def real_part(x):
    if isinstance(x, GaussQ):
        return x.re
    if isinstance(x, complex):
        return x.real
    return x


def imag_part(x):
    if isinstance(x, GaussQ):
        return x.im
    if isinstance(x, complex):
        return x.imag
    if isinstance(x, float):
        return 0.0
    return ZERO


def to_float(x):
    if isinstance(x, GaussQ):
        return complex(x)
    if isinstance(x, complex):
        return x
    return float(x)


def close(a, b, atol: float = FLOAT_ATOL) -> bool:
    return abs(complex(to_float(a)) - complex(to_float(b))) <= atol


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str):
    """Parse ``"p/q"`` or ``"p"``; ``mpq`` normalizes to lowest terms."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return mpq(num, den)


def format_rational(q) -> str:
    q = mpq(q)
    return str(q)


def format_scalar(x) -> str:
    """Text form used in reports; exact values stay exact."""
    if isinstance(x, GaussQ):
        im = format_rational(abs(x.im)) if abs(x.im) != 1 else ""
        if x.re == 0:
            return f"{'-' if x.im < 0 else ''}{im}i"
        return f"({format_rational(x.re)}{'-' if x.im < 0 else '+'}{im or '1'}i)"
    if isinstance(x, (float, complex)):
        return repr(x)
    return format_rational(x)
