"""Exact Gaussian rationals, stored as (re + im*i) / den with integer parts."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Rat = Fraction


def _reduce(re: int, im: int, den: int) -> tuple[int, int, int]:
    if den < 0:
        re, im, den = -re, -im, -den
    if den == 1:
        return re, im, 1
    g = gcd(gcd(re, im), den)
    if g > 1:
        return re // g, im // g, den // g
    return re, im, den


class GaussRat:
    """Element of Q(i).

    Instances are immutable and hashable; equality with ints and Fractions
    works for real values.
    """

    __slots__ = ("_re", "_im", "_den")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            if im:
                raise TypeError("GaussRat real part given as GaussRat with nonzero im")
            self._re, self._im, self._den = re._re, re._im, re._den
            return
        fr = Fraction(re)
        fi = Fraction(im)
        den = fr.denominator * fi.denominator // gcd(fr.denominator, fi.denominator)
        self._re, self._im, self._den = _reduce(
            fr.numerator * (den // fr.denominator),
            fi.numerator * (den // fi.denominator),
            den,
        )

    @classmethod
    def _raw(cls, re: int, im: int, den: int) -> "GaussRat":
        obj = object.__new__(cls)
        obj._re, obj._im, obj._den = _reduce(re, im, den)
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, Fraction):
            return cls._raw(value.numerator, 0, value.denominator)
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value)

    @property
    def re(self) -> Fraction:
        return Fraction(self._re, self._den)

    @property
    def im(self) -> Fraction:
        return Fraction(self._im, self._den)

    @property
    def is_real(self) -> bool:
        return self._im == 0

    @property
    def height(self) -> int:
        """Bit size of the largest integer in the representation."""
        return max(abs(self._re).bit_length(), abs(self._im).bit_length(), self._den.bit_length())

    def __bool__(self) -> bool:
        return self._re != 0 or self._im != 0

    def __hash__(self) -> int:
        if self._im == 0:
            return hash(Fraction(self._re, self._den))
        return hash((self._re, self._im, self._den))

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRat):
            return self._re == other._re and self._im == other._im and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self._im == 0 and Fraction(self._re, self._den) == other
        return NotImplemented

    def __neg__(self) -> "GaussRat":
        obj = object.__new__(GaussRat)
        obj._re, obj._im, obj._den = -self._re, -self._im, self._den
        return obj

    def __add__(self, other) -> "GaussRat":
        if not isinstance(other, GaussRat):
            if isinstance(other, int):
                return GaussRat._raw(self._re + other * self._den, self._im, self._den)
            other = GaussRat.coerce(other)
        if self._den == other._den:
            return GaussRat._raw(self._re + other._re, self._im + other._im, self._den)
        return GaussRat._raw(
            self._re * other._den + other._re * self._den,
            self._im * other._den + other._im * self._den,
            self._den * other._den,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "GaussRat":
        if not isinstance(other, GaussRat):
            other = GaussRat.coerce(other)
        return self + (-other)

    def __rsub__(self, other) -> "GaussRat":
        return GaussRat.coerce(other) - self

    def __mul__(self, other) -> "GaussRat":
        if not isinstance(other, GaussRat):
            if isinstance(other, int):
                return GaussRat._raw(self._re * other, self._im * other, self._den)
            other = GaussRat.coerce(other)
        a, b, c, d = self._re, self._im, other._re, other._im
        if b == 0 and d == 0:
            return GaussRat._raw(a * c, 0, self._den * other._den)
        return GaussRat._raw(a * c - b * d, a * d + b * c, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        if not self:
            raise ZeroDivisionError("GaussRat division by zero")
        a, b = self._re, self._im
        norm = a * a + b * b
        # (a+bi)/den inverted: den*(a-bi)/norm
        return GaussRat._raw(self._den * a, -self._den * b, norm)

    def __truediv__(self, other) -> "GaussRat":
        if not isinstance(other, GaussRat):
            other = GaussRat.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "GaussRat":
        return GaussRat.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussRat":
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

    def conjugate(self) -> "GaussRat":
        return GaussRat._raw(self._re, -self._im, self._den)

    def __complex__(self) -> complex:
        return complex(self._re / self._den, self._im / self._den)

    def to_mp(self):
        import mpmath

        return mpmath.mpc(mpmath.mpf(self._re) / self._den, mpmath.mpf(self._im) / self._den)

    def __repr__(self) -> str:
        return f"GaussRat({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        return format_gauss(self)


ZERO = GaussRat._raw(0, 0, 1)
ONE = GaussRat._raw(1, 0, 1)
I = GaussRat._raw(0, 1, 1)


def _frac_text(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def format_gauss(c: GaussRat) -> str:
    """Canonical text: "3", "-1/2", "i", "2/3*i", "(1+2*i)"."""
    re, im = c.re, c.im
    if im == 0:
        return _frac_text(re)
    if im == 1:
        im_text = "i"
    elif im == -1:
        im_text = "-i"
    else:
        im_text = f"{_frac_text(im)}*i"
    if re == 0:
        return im_text
    sign = "-" if im < 0 else "+"
    im_abs = im_text.lstrip("-")
    return f"({_frac_text(re)}{sign}{im_abs})"


def rationalize(z: complex, max_den: int = 10_000, tol: float = 1e-10) -> GaussRat | None:
    """Best small-denominator Gaussian rational near ``z``, or None."""
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    scale = max(1.0, abs(z))
    if abs(complex(float(re), float(im)) - z) > tol * scale:
        return None
    return GaussRat(re, im)
