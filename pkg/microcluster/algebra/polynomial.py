"""Sparse multivariate polynomials over the Gaussian rationals."""
from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from microcluster.algebra.gaussian import GaussianRational
from microcluster.algebra.variables import (
    NVARS,
    ONE,
    VARIABLES,
    Monomial,
    Variable,
    monomial,
    monomial_key,
    render_monomial,
    unit,
)
from microcluster.exceptions import MissingAssignmentError

_EXACT_TYPES = (int, Fraction, GaussianRational)


def _add_mono(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable polynomial in the fixed variable set.

    Terms map exponent vectors (one entry per :class:`Variable`) to nonzero
    :class:`GaussianRational` coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Any] | None = None) -> None:
        clean: dict[Monomial, GaussianRational] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != NVARS:
                raise ValueError(f"monomial {mono} must have {NVARS} exponents")
            value = GaussianRational.coerce(coeff)
            if mono in clean:
                value = clean[mono] + value
            clean[mono] = value
        self._terms = {m: c for m, c in clean.items() if not c.is_zero()}
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, terms: dict[Monomial, GaussianRational]) -> Polynomial:
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> Polynomial:
        return cls._wrap({})

    @classmethod
    def constant(cls, value: Any) -> Polynomial:
        c = GaussianRational.coerce(value)
        return cls._wrap({ONE: c} if not c.is_zero() else {})

    @classmethod
    def one(cls) -> Polynomial:
        return cls.constant(1)

    @classmethod
    def variable(cls, var: Variable | str) -> Polynomial:
        return cls._wrap({unit(var): GaussianRational(1)})

    @classmethod
    def monomial(cls, powers: Mapping[Variable | str, int], coeff: Any = 1) -> Polynomial:
        return cls({monomial(powers): coeff})

    @classmethod
    def coerce(cls, value: Any) -> Polynomial:
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, _EXACT_TYPES) or isinstance(value, complex):
            return cls.constant(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Polynomial")

    # --- inspection -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, GaussianRational]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, GaussianRational]]:
        return sorted(self._terms.items(), key=lambda item: monomial_key(item[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get(ONE, GaussianRational(0))

    def coefficient(self, mono: Monomial | Mapping[Variable | str, int]) -> GaussianRational:
        if not isinstance(mono, tuple):
            mono = monomial(mono)
        return self._terms.get(mono, GaussianRational(0))

    def variables(self) -> tuple[Variable, ...]:
        used = [False] * NVARS
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used[i] = True
        return tuple(v for v, flag in zip(VARIABLES, used) if flag)

    def degree(self, var: Variable | str | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        i = Variable.parse(var).index
        return max(m[i] for m in self._terms)

    def leading_coefficient(self) -> GaussianRational:
        """Coefficient of the first term in canonical order."""
        if not self._terms:
            return GaussianRational(0)
        return min(self._terms.items(), key=lambda item: monomial_key(item[0]))[1]

    def __bool__(self) -> bool:
        return bool(self._terms)

    # --- arithmetic -----------------------------------------------------

    @staticmethod
    def _other(other: Any) -> Polynomial | None:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, _EXACT_TYPES):
            return Polynomial.constant(other)
        return None

    def __add__(self, other: Any) -> Polynomial:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        if not rhs._terms:
            return self
        if not self._terms:
            return rhs
        terms = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            if mono in terms:
                value = terms[mono] + coeff
                if value.is_zero():
                    del terms[mono]
                else:
                    terms[mono] = value
            else:
                terms[mono] = coeff
        return Polynomial._wrap(terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> Polynomial:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: Any) -> Polynomial:
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def scale(self, factor: Any) -> Polynomial:
        c = GaussianRational.coerce(factor)
        if c.is_zero():
            return Polynomial.zero()
        if c == 1:
            return self
        return Polynomial._wrap({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other: Any) -> Polynomial:
        if isinstance(other, _EXACT_TYPES):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial.zero()
        if other.is_constant():
            return self.scale(other._terms[ONE])
        if self.is_constant():
            return other.scale(self._terms[ONE])
        terms: dict[Monomial, GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _add_mono(m1, m2)
                value = c1 * c2
                if mono in terms:
                    terms[mono] = terms[mono] + value
                else:
                    terms[mono] = value
        return Polynomial._wrap({m: c for m, c in terms.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Polynomial:
        # exact division by a scalar only; use RationalFunction otherwise
        if isinstance(other, Polynomial):
            if not other.is_constant():
                return NotImplemented
            other = other.constant_term()
        if not isinstance(other, _EXACT_TYPES):
            return NotImplemented
        c = GaussianRational.coerce(other)
        if c.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(GaussianRational(1) / c)

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = Polynomial.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def conjugate(self) -> Polynomial:
        if all(c.is_real() for c in self._terms.values()):
            return self
        return Polynomial._wrap({m: c.conjugate() for m, c in self._terms.items()})

    # --- substitution / evaluation --------------------------------------

    def substitute(self, mapping: Mapping[Variable | str, Any]) -> Polynomial:
        subs = {Variable.parse(v).index: Polynomial.coerce(p) for v, p in mapping.items()}
        if not subs:
            return self
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(index: int, exp: int) -> Polynomial:
            key = (index, exp)
            if key not in powers:
                powers[key] = subs[index] ** exp
            return powers[key]

        result = Polynomial.zero()
        for mono, coeff in self._terms.items():
            kept = tuple(0 if i in subs else e for i, e in enumerate(mono))
            term = Polynomial._wrap({kept: coeff})
            for i, e in enumerate(mono):
                if e and i in subs:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[Variable | str, Any]) -> GaussianRational | float | complex:
        """Evaluate at ``point``.

        Exact inputs give an exact :class:`GaussianRational`. If any assigned
        value is a float the sum is still formed exactly (floats convert
        exactly to rationals) and rounded once at the end.
        """
        values = {Variable.parse(v).index: x for v, x in point.items()}
        missing = [v.value for v in self.variables() if v.index not in values]
        if missing:
            raise MissingAssignmentError(
                f"no value assigned to {', '.join(missing)}",
                details={"missing": missing},
            )
        used = _used(self)
        inexact = any(isinstance(values[i], (float, complex)) for i in used)
        exact = {i: GaussianRational.coerce(values[i]) for i in used}
        total = GaussianRational(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for i, e in enumerate(mono):
                if e:
                    term = term * exact[i] ** e
            total = total + term
        if inexact:
            return _round(total)
        return total

    def evaluate_float(self, point: Mapping[Variable | str, Any]) -> float | complex:
        return _round(GaussianRational.coerce(self.evaluate(point)))

    # --- comparison / rendering -----------------------------------------

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, _EXACT_TYPES):
            if not self.is_constant():
                return False
            return self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return render_terms(self.sorted_terms())


def _used(poly: Polynomial) -> set[int]:
    return {v.index for v in poly.variables()}


def _round(value: GaussianRational) -> float | complex:
    if value.is_real():
        return float(value.re)
    return complex(float(value.re), float(value.im))


def render_terms(terms: Iterable[tuple[Monomial, GaussianRational]]) -> str:
    """Canonical text: sorted monomials, explicit signs, rationals as a/b."""
    pieces: list[str] = []
    for mono, coeff in terms:
        body = render_monomial(mono)
        if coeff.is_real():
            negative = coeff.re < 0
            magnitude = abs(coeff.re)
            if body:
                text = body if magnitude == 1 else f"{magnitude}*{body}"
            else:
                text = str(magnitude)
        else:
            negative = False
            text = f"{coeff}*{body}" if body else str(coeff)
        if not pieces:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f" - {text}" if negative else f" + {text}")
    return "".join(pieces) if pieces else "0"


def var(name: Variable | str) -> Polynomial:
    """Shorthand used throughout tests and closed forms."""
    return Polynomial.variable(name)
