"""Helpers that treat every supported scalar uniformly.

Supported scalars: Python ints, Fractions, :class:`GaussianRational`,
:class:`Polynomial`, :class:`TruncatedSeries` (exact), and Python / numpy
floats and complexes (float backend).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

import numpy as np

from microcluster.algebra.gaussian import GaussianRational
from microcluster.algebra.polynomial import Polynomial
from microcluster.algebra.rational import RationalFunction
from microcluster.algebra.series import TruncatedSeries
from microcluster.exceptions import ZeroDenominatorError

EXACT_NUMBER_TYPES = (int, Fraction, GaussianRational)
_UNITS = (1, -1, GaussianRational(0, 1), GaussianRational(0, -1))


def is_exact(value: Any) -> bool:
    return isinstance(value, (*EXACT_NUMBER_TYPES, Polynomial, TruncatedSeries, RationalFunction))


def is_zero(value: Any) -> bool:
    return value == 0


def conjugate(value: Any) -> Any:
    return value.conjugate()


def leading_coefficient(value: Any) -> GaussianRational | complex:
    if isinstance(value, (Polynomial, TruncatedSeries)):
        return value.leading_coefficient()
    if isinstance(value, EXACT_NUMBER_TYPES):
        return GaussianRational.coerce(value)
    return complex(value)


def phase_unit(value: Any) -> Any:
    """The unit u in {1, -1, i, -i} making u * lead have re > 0 and im >= 0."""
    lead = leading_coefficient(value)
    if isinstance(lead, complex):
        re, im = lead.real, lead.imag
    else:
        re, im = lead.re, lead.im
    if re > 0 and im >= 0:
        return _UNITS[0]
    if re < 0 and im <= 0:
        return _UNITS[1]
    if re <= 0 and im > 0:
        # i * (re + im i) = -im + re i
        return _UNITS[3]
    return _UNITS[2]


def ratio(num: Any, den: Any, *, context: str = "ratio") -> Any:
    """``num / den`` in the natural result type of the operands.

    Polynomials give a :class:`RationalFunction`, series divide as series,
    exact numbers stay exact and floats give a real float.
    """
    if is_zero(den):
        raise ZeroDenominatorError(f"{context}: denominator is zero")
    if isinstance(num, RationalFunction) or isinstance(den, RationalFunction):
        return RationalFunction(1) * num / den
    if isinstance(num, Polynomial) or isinstance(den, Polynomial):
        return RationalFunction(num, den)
    if isinstance(num, TruncatedSeries) or isinstance(den, TruncatedSeries):
        if isinstance(num, TruncatedSeries):
            return num / den
        return den.inverse() * num
    if isinstance(num, EXACT_NUMBER_TYPES) and isinstance(den, EXACT_NUMBER_TYPES):
        return GaussianRational.coerce(num) / GaussianRational.coerce(den)
    value = complex(num) / complex(den)
    return float(value.real)


def to_float(value: Any) -> float:
    """Real part of a numeric scalar as a float."""
    if isinstance(value, GaussianRational):
        return float(value.re)
    if isinstance(value, (int, Fraction)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return float(value.real)
    return float(value)
