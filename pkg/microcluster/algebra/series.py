"""Truncated multivariate power series about the origin."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Mapping

from microcluster.algebra.gaussian import GaussianRational
from microcluster.algebra.polynomial import Polynomial, render_terms
from microcluster.algebra.variables import (
    NVARS,
    ONE,
    VARIABLES,
    Monomial,
    Variable,
    monomial,
    monomial_key,
    unit,
)
from microcluster.exceptions import ZeroDenominatorError

Caps = tuple[int, ...]

_EXACT_TYPES = (int, Fraction, GaussianRational)


def make_caps(caps: Mapping[Variable | str, int] | Caps) -> Caps:
    if isinstance(caps, tuple):
        if len(caps) != NVARS:
            raise ValueError(f"caps must have {NVARS} entries")
        return caps
    out = [0] * NVARS
    for v, cap in caps.items():
        if cap < 0:
            raise ValueError("degree caps must be nonnegative")
        out[Variable.parse(v).index] = cap
    return tuple(out)


class TruncatedSeries:
    """Power series with per-variable degree caps.

    Every stored exponent lies within ``caps``; products drop anything
    beyond them, so arithmetic agrees with the Taylor expansion of the exact
    result up to the caps.
    """

    __slots__ = ("caps", "_terms", "_hash")

    def __init__(self, caps: Mapping[Variable | str, int] | Caps, terms: Mapping[Monomial, Any] | None = None) -> None:
        self.caps = make_caps(caps)
        clean: dict[Monomial, GaussianRational] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if not self._within(mono):
                continue
            value = GaussianRational.coerce(coeff)
            if mono in clean:
                value = clean[mono] + value
            clean[mono] = value
        self._terms = {m: c for m, c in clean.items() if not c.is_zero()}
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, caps: Caps, terms: dict[Monomial, GaussianRational]) -> TruncatedSeries:
        obj = object.__new__(cls)
        obj.caps = caps
        obj._terms = terms
        obj._hash = None
        return obj

    def _within(self, mono: Monomial) -> bool:
        return all(e <= c for e, c in zip(mono, self.caps))

    # --- constructors ---------------------------------------------------

    @classmethod
    def from_polynomial(cls, poly: Polynomial, caps: Mapping[Variable | str, int] | Caps) -> TruncatedSeries:
        return cls(caps, dict(poly.terms))

    @classmethod
    def constant(cls, value: Any, caps: Mapping[Variable | str, int] | Caps) -> TruncatedSeries:
        return cls(caps, {ONE: value})

    @classmethod
    def variable(cls, var: Variable | str, caps: Mapping[Variable | str, int] | Caps) -> TruncatedSeries:
        return cls(caps, {unit(var): 1})

    def _coerce(self, other: Any) -> TruncatedSeries | None:
        if isinstance(other, TruncatedSeries):
            if other.caps != self.caps:
                raise ValueError("series with different degree caps cannot be combined")
            return other
        if isinstance(other, Polynomial):
            return TruncatedSeries.from_polynomial(other, self.caps)
        if isinstance(other, _EXACT_TYPES):
            c = GaussianRational.coerce(other)
            return TruncatedSeries._wrap(self.caps, {ONE: c} if not c.is_zero() else {})
        return None

    # --- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get(ONE, GaussianRational(0))

    def coefficient(self, mono: Monomial | Mapping[Variable | str, int]) -> GaussianRational:
        if not isinstance(mono, tuple):
            mono = monomial(mono)
        return self._terms.get(mono, GaussianRational(0))

    def sorted_terms(self) -> list[tuple[Monomial, GaussianRational]]:
        return sorted(self._terms.items(), key=lambda item: monomial_key(item[0]))

    def leading_coefficient(self) -> GaussianRational:
        if not self._terms:
            return GaussianRational(0)
        return min(self._terms.items(), key=lambda item: monomial_key(item[0]))[1]

    def to_polynomial(self) -> Polynomial:
        return Polynomial(self._terms)

    def evaluate(self, point: Mapping[Variable | str, Any]) -> GaussianRational | float | complex:
        return self.to_polynomial().evaluate(point)

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other: Any) -> TruncatedSeries:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            value = terms[mono] + coeff if mono in terms else coeff
            if value.is_zero():
                terms.pop(mono, None)
            else:
                terms[mono] = value
        return TruncatedSeries._wrap(self.caps, terms)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._wrap(self.caps, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> TruncatedSeries:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> TruncatedSeries:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def _scale(self, c: GaussianRational) -> TruncatedSeries:
        if c.is_zero():
            return TruncatedSeries._wrap(self.caps, {})
        if c == 1:
            return self
        return TruncatedSeries._wrap(self.caps, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other: Any) -> TruncatedSeries:
        if isinstance(other, _EXACT_TYPES):
            return self._scale(GaussianRational.coerce(other))
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        caps = self.caps
        terms: dict[Monomial, GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in rhs._terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                if any(e > c for e, c in zip(mono, caps)):
                    continue
                value = c1 * c2
                terms[mono] = terms[mono] + value if mono in terms else value
        return TruncatedSeries._wrap(caps, {m: c for m, c in terms.items() if not c.is_zero()})

    __rmul__ = __mul__

    def inverse(self) -> TruncatedSeries:
        c0 = self.constant_term()
        if c0.is_zero():
            raise ZeroDenominatorError(
                "series has no inverse: constant term is zero at the expansion point",
                details={"series": str(self)},
            )
        inv_c0 = GaussianRational(1) / c0
        # self = c0 * (1 - u) with u nilpotent under the caps
        u = TruncatedSeries._wrap(self.caps, {}) + 1 - self._scale(inv_c0)
        result = TruncatedSeries.constant(1, self.caps)
        power = result
        for _ in range(sum(self.caps)):
            power = power * u
            if power.is_zero():
                break
            result = result + power
        return result._scale(inv_c0)

    def __truediv__(self, other: Any) -> TruncatedSeries:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.inverse()

    def __rtruediv__(self, other: Any) -> TruncatedSeries:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs * self.inverse()

    def __pow__(self, exponent: int) -> TruncatedSeries:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = TruncatedSeries.constant(1, self.caps)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def conjugate(self) -> TruncatedSeries:
        if all(c.is_real() for c in self._terms.values()):
            return self
        return TruncatedSeries._wrap(self.caps, {m: c.conjugate() for m, c in self._terms.items()})

    # --- comparison / rendering -----------------------------------------

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.caps == other.caps and self._terms == other._terms
        if isinstance(other, _EXACT_TYPES):
            c = GaussianRational.coerce(other)
            if c.is_zero():
                return not self._terms
            return len(self._terms) == 1 and self._terms.get(ONE) == c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if not self._terms or set(self._terms) == {ONE}:
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        caps = ", ".join(f"{v.value}<={c}" for v, c in zip(VARIABLES, self.caps) if c)
        return f"TruncatedSeries({self} ; {caps})"

    def __str__(self) -> str:
        return render_terms(self.sorted_terms())


def series_expand(f: Any, caps: Mapping[Variable | str, int] | Caps) -> TruncatedSeries:
    """Taylor expansion about the all-zeros point, exact up to ``caps``.

    ``f`` may be a :class:`Polynomial` or anything exposing ``num`` and
    ``den`` polynomials; the numerator is multiplied by the truncated
    multiplicative inverse of the denominator.
    """
    caps = make_caps(caps)
    if isinstance(f, Polynomial):
        return TruncatedSeries.from_polynomial(f, caps)
    num = TruncatedSeries.from_polynomial(f.num, caps)
    den = TruncatedSeries.from_polynomial(f.den, caps)
    if f.den.constant_term().is_zero():
        raise ZeroDenominatorError(
            "expansion point is a zero of the denominator",
            details={"denominator": str(f.den)},
        )
    return num * den.inverse()
