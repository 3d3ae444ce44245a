"""Exact Gaussian rationals p/q + (r/s)i.

Both parts are :class:`fractions.Fraction`, so the canonical form (reduced,
positive denominators) and exact equality come for free.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Optional, Union

__all__ = ["GaussianRational", "as_scalar", "gaussian_sqrt", "rational_sqrt", "I", "ZERO", "ONE"]

ScalarLike = Union["GaussianRational", int, Fraction, str]

_GR_RE = re.compile(
    r"""^\s*(?:
        (?P<re>[+-]?\d+(?:/\d+)?)
        (?:\s*(?P<sign>[+-])\s*(?P<im1>\d+(?:/\d+)?)?\s*i)?
      |
        (?P<im2>[+-]?(?:\d+(?:/\d+)?)?)\s*i
    )\s*$""",
    re.VERBOSE,
)


class GaussianRational:
    """An element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse forms like ``3``, ``-1/2``, ``2i``, ``-i``, ``1/2+3/4i``."""
        t = text.strip()
        if t.startswith("(") and t.endswith(")"):
            t = t[1:-1]
        m = _GR_RE.match(t)
        if not m:
            raise ValueError(f"not a Gaussian rational: {text!r}")
        if m.group("re") is not None:
            re_part = Fraction(m.group("re"))
            if m.group("sign") is None:
                return cls(re_part)
            im_part = Fraction(m.group("im1") or 1)
            return cls(re_part, im_part if m.group("sign") == "+" else -im_part)
        coef = m.group("im2")
        if coef in ("", "+"):
            return cls(0, 1)
        if coef == "-":
            return cls(0, -1)
        return cls(0, Fraction(coef))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        c = o.conjugate()
        return GaussianRational((self.re * c.re - self.im * c.im) / n, (self.re * c.im + self.im * c.re) / n)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** -k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    # comparison / hashing ---------------------------------------------------

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def sort_key(self):
        return (self.re, self.im)

    # printing ---------------------------------------------------------------

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = _im_str(self.im)
        if self.re == 0:
            return im
        return f"{self.re}{'' if im.startswith('-') else '+'}{im}"

    def __repr__(self):
        return f"GaussianRational({self})"

    def _sympy_(self):
        import sympy

        return sympy.Rational(self.re.numerator, self.re.denominator) + sympy.I * sympy.Rational(
            self.im.numerator, self.im.denominator
        )


def _im_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    return f"{v}i"


def _coerce(value) -> Optional[GaussianRational]:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)) or isinstance(value, Rational):
        return GaussianRational(Fraction(value))
    return None


def as_scalar(value: ScalarLike) -> GaussianRational:
    """Convert ints, Fractions and strings to :class:`GaussianRational`.

    Floats are refused: every quantity in the symbolic layer must be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        return GaussianRational.parse(value)
    out = _coerce(value)
    if out is None:
        raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact scalar")
    return out


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact nonnegative square root of a rational, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(z: ScalarLike) -> Optional[GaussianRational]:
    """Principal square root in Q(i), or None when z is not a square there.

    The principal root has positive real part, or zero real part and
    nonnegative imaginary part (agrees with sympy's ``sqrt`` on rationals).
    """
    z = as_scalar(z)
    a, b = z.re, z.im
    if b == 0:
        if a >= 0:
            r = rational_sqrt(a)
            return None if r is None else GaussianRational(r)
        r = rational_sqrt(-a)
        return None if r is None else GaussianRational(0, r)
    n = rational_sqrt(a * a + b * b)
    if n is None:
        return None
    x = rational_sqrt((n + a) / 2)
    if x is None or x == 0:
        return None
    y = b / (2 * x)
    return GaussianRational(x, y)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
