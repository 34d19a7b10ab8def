"""Exact complex numbers with rational real and imaginary parts."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any


def _rational(value: Any) -> int | Fraction:
    """Normalise to an int when the denominator is 1, else a Fraction."""
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return _rational(Fraction(value.numerator, value.denominator))
    if isinstance(value, float):
        return _rational(Fraction(value))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class GaussianRational:
    """``re + im*i`` with ``re, im`` exact rationals.

    Parts are stored as ``int`` whenever the denominator is 1 so that the
    common integer amplitudes of the simulator stay on the fast path.
    Fractions are always in lowest terms with a positive denominator.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0) -> None:
        self.re = _rational(re)
        self.im = _rational(im)

    @classmethod
    def _raw(cls, re: int | Fraction, im: int | Fraction) -> GaussianRational:
        obj = object.__new__(cls)
        if type(re) is Fraction and re.denominator == 1:
            re = re.numerator
        if type(im) is Fraction and im.denominator == 1:
            im = im.numerator
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value: Any) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value, 0)

    # --- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                return GaussianRational._raw(self.re + other, self.im)
            return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational._raw(-self.re, -self.im)

    def __sub__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                return GaussianRational._raw(self.re - other, self.im)
            return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Any) -> GaussianRational:
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                return GaussianRational._raw(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, 0)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by an exact zero")
        c, d = other.re, other.im
        if not d:
            return GaussianRational._raw(Fraction(self.re) / c, Fraction(self.im) / c)
        norm = Fraction(c * c + d * d)
        return GaussianRational._raw(
            (self.re * c + self.im * d) / norm,
            (self.im * c - self.re * d) / norm,
        )

    def __rtruediv__(self, other: Any) -> GaussianRational:
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other) / self
        return NotImplemented

    def __pow__(self, exponent: int) -> GaussianRational:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return GaussianRational(1) / self ** (-exponent)
        result = GaussianRational._raw(1, 0)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> GaussianRational:
        if not self.im:
            return self
        return GaussianRational._raw(self.re, -self.im)

    def abs2(self) -> int | Fraction:
        return self.re * self.re + self.im * self.im

    # --- comparison / conversion ----------------------------------------

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __float__(self) -> float:
        if self.im:
            raise TypeError("complex value has no float conversion")
        return float(self.re)

    def real_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"{self} is not real")
        return Fraction(self.re)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"({self.re}{sign}{abs(self.im)}i)"


I_UNIT = GaussianRational(0, 1)
