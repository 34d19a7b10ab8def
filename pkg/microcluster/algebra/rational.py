"""Rational functions kept unreduced; equality by cross-multiplication."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping

from microcluster.algebra.gaussian import GaussianRational
from microcluster.algebra.polynomial import Polynomial
from microcluster.algebra.series import Caps, TruncatedSeries, series_expand
from microcluster.algebra.variables import Variable
from microcluster.exceptions import DomainError, ZeroDenominatorError

_EXACT_TYPES = (int, Fraction, GaussianRational)


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Any, den: Any = 1) -> None:
        num = Polynomial.coerce(num)
        den = Polynomial.coerce(den)
        if den.is_zero():
            raise ZeroDenominatorError("rational function with zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def _other(other: Any) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial) or isinstance(other, _EXACT_TYPES):
            return RationalFunction(other)
        return None

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other: Any) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        if self.den == rhs.den:
            return RationalFunction(self.num + rhs.num, self.den)
        return RationalFunction(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: Any) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> RationalFunction:
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other: Any) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return RationalFunction(self.num * rhs.num, self.den * rhs.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> RationalFunction:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        if rhs.num.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        return RationalFunction(self.num * rhs.den, self.den * rhs.num)

    def __rtruediv__(self, other: Any) -> RationalFunction:
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs / self

    def __pow__(self, exponent: int) -> RationalFunction:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if self.num.is_zero():
                raise ZeroDenominatorError("negative power of the zero rational function")
            return RationalFunction(self.den ** (-exponent), self.num ** (-exponent))
        return RationalFunction(self.num ** exponent, self.den ** exponent)

    def conjugate(self) -> RationalFunction:
        return RationalFunction(self.num.conjugate(), self.den.conjugate())

    def substitute(self, mapping: Mapping[Variable | str, Any]) -> RationalFunction:
        return RationalFunction(self.num.substitute(mapping), self.den.substitute(mapping))

    # --- evaluation -----------------------------------------------------

    def evaluate(self, point: Mapping[Variable | str, Any]) -> GaussianRational | float | complex:
        inexact = any(isinstance(x, (float, complex)) for x in point.values())
        exact_point = {v: GaussianRational.coerce(x) for v, x in point.items()}
        den = self.den.evaluate(exact_point)
        if den.is_zero():
            raise ZeroDenominatorError(
                "denominator vanishes at the evaluation point",
                details={"point": {Variable.parse(v).value: str(x) for v, x in point.items()}},
            )
        value = self.num.evaluate(exact_point) / den
        if inexact:
            return float(value.re) if value.is_real() else complex(value)
        return value

    def series(self, caps: Mapping[Variable | str, int] | Caps) -> TruncatedSeries:
        return series_expand(self, caps)

    def as_polynomial(self) -> Polynomial:
        """The numerator over a constant denominator, as a polynomial."""
        if not self.den.is_constant():
            raise DomainError("denominator is not constant", details={"denominator": str(self.den)})
        return self.num / self.den.constant_term()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    # --- comparison / rendering -----------------------------------------

    def __eq__(self, other: Any) -> bool:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self.num * rhs.den == rhs.num * self.den

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"
