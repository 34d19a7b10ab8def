"""Exact scalar arithmetic for the simulator."""
from microcluster.algebra.gaussian import I_UNIT, GaussianRational
from microcluster.algebra.polynomial import Polynomial, render_terms, var
from microcluster.algebra.rational import RationalFunction
from microcluster.algebra.scalars import is_exact, is_zero, ratio, to_float
from microcluster.algebra.series import TruncatedSeries, make_caps, series_expand
from microcluster.algebra.variables import (
    ONE,
    VARIABLES,
    Monomial,
    Variable,
    monomial,
    parse_monomial,
    render_monomial,
)

__all__ = [
    "GaussianRational",
    "I_UNIT",
    "Monomial",
    "ONE",
    "Polynomial",
    "RationalFunction",
    "TruncatedSeries",
    "VARIABLES",
    "Variable",
    "is_exact",
    "is_zero",
    "make_caps",
    "monomial",
    "parse_monomial",
    "ratio",
    "render_monomial",
    "render_terms",
    "series_expand",
    "to_float",
    "var",
]
