"""Tests for exact scalars, polynomials, rational functions and truncated series."""
from fractions import Fraction

import pytest

from microcluster.algebra import (
    I_UNIT,
    ONE,
    GaussianRational,
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    Variable,
    monomial,
    parse_monomial,
    ratio,
    render_monomial,
    series_expand,
    to_float,
    var,
)
from microcluster.exceptions import ZeroDenominatorError

p = var("p")
alpha = var("alpha")


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class TestGaussianRational:
    def test_i_squared_is_minus_one(self):
        assert I_UNIT * I_UNIT == -1

    def test_division_stays_exact(self):
        z = GaussianRational(1, 1) / GaussianRational(1, -1)
        assert z == I_UNIT

    def test_integer_parts_normalized(self):
        z = GaussianRational(Fraction(4, 2), 0)
        assert type(z.re) is int
        assert z == 2

    def test_conjugate_and_abs2(self):
        z = GaussianRational(3, 4)
        assert z.conjugate() == GaussianRational(3, -4)
        assert z.abs2() == 25

    def test_real_fraction_rejects_complex(self):
        with pytest.raises(ValueError):
            GaussianRational(1, 1).real_fraction()

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / GaussianRational(0)

    def test_str(self):
        assert str(GaussianRational(Fraction(1, 2), -1)) == "(1/2-1i)"
        assert str(I_UNIT) == "1i"


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

class TestMonomials:
    def test_render_and_parse_agree(self):
        mono = monomial({Variable.ALPHA: 2, Variable.P: 1})
        assert render_monomial(mono) == "alpha^2*p"
        assert parse_monomial("alpha^2*p") == mono

    def test_one(self):
        assert parse_monomial("1") == ONE
        assert render_monomial(ONE) == ""

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            monomial({Variable.P: -1})


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class TestPolynomial:
    def test_zero_terms_dropped(self):
        assert (p - p).is_zero()
        assert (p - p) == 0

    def test_binomial_square(self):
        square = (1 - alpha) ** 2
        assert square.coefficient({Variable.ALPHA: 1}) == -2
        assert square.coefficient({Variable.ALPHA: 2}) == 1
        assert square.constant_term() == 1

    def test_degree(self):
        poly = alpha**2 * p + p
        assert poly.degree() == 3
        assert poly.degree(Variable.P) == 1

    def test_substitute_polynomial(self):
        q = var("q")
        poly = (2 * p - 1).substitute({Variable.P: (q + 1) / 2})
        assert poly == q

    def test_evaluate_exact(self):
        assert (1 - 3 * p).evaluate({Variable.P: Fraction(1, 3)}) == 0

    def test_evaluate_float(self):
        assert (1 - 3 * p).evaluate_float({Variable.P: 0.1}) == pytest.approx(0.7)

    def test_exact_division_by_constant(self):
        assert (2 * p) / 2 == p


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

class TestRationalFunction:
    def test_equality_by_cross_multiplication(self):
        assert RationalFunction(2 * p, 2) == RationalFunction(p)
        assert RationalFunction(p * (1 - p), 1 - p) == p

    def test_evaluate(self):
        f = RationalFunction(1 - alpha, 1 + alpha)
        assert f.evaluate({Variable.ALPHA: Fraction(1, 3)}) == Fraction(1, 2)

    def test_evaluate_zero_denominator(self):
        f = RationalFunction(1, alpha)
        with pytest.raises(ZeroDenominatorError):
            f.evaluate({Variable.ALPHA: 0})

    def test_as_polynomial(self):
        assert RationalFunction(4 * p, 2).as_polynomial() == 2 * p


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------

class TestTruncatedSeries:
    def test_caps_drop_high_orders(self):
        caps = {Variable.P: 1, Variable.ALPHA: 2}
        s = TruncatedSeries.variable(Variable.P, caps)
        assert (s * s).is_zero()

    def test_inverse_of_one_minus_alpha(self):
        caps = {Variable.ALPHA: 2}
        s = 1 - TruncatedSeries.variable(Variable.ALPHA, caps)
        inv = s.inverse()
        assert inv.coefficient({Variable.ALPHA: 0}) == 1
        assert inv.coefficient({Variable.ALPHA: 1}) == 1
        assert inv.coefficient({Variable.ALPHA: 2}) == 1

    def test_inverse_needs_nonzero_constant(self):
        s = TruncatedSeries.variable(Variable.P, {Variable.P: 1})
        with pytest.raises(ZeroDenominatorError):
            s.inverse()

    def test_series_expand_rational(self):
        f = RationalFunction(1, 1 + 2 * (alpha**2 - alpha))
        s = series_expand(f, {Variable.ALPHA: 2})
        # 1 / (1 - 2a + 2a^2) = 1 + 2a + 2a^2 + O(a^3)
        assert s.coefficient({Variable.ALPHA: 1}) == 2
        assert s.coefficient({Variable.ALPHA: 2}) == 2


# ---------------------------------------------------------------------------
# Scalar helpers
# ---------------------------------------------------------------------------

class TestScalarHelpers:
    def test_ratio_exact(self):
        assert ratio(1, 4) == Fraction(1, 4)

    def test_ratio_float(self):
        assert ratio(1.0, 4.0) == pytest.approx(0.25)

    def test_ratio_polynomial_gives_rational_function(self):
        assert isinstance(ratio(p, 1 + p), RationalFunction)

    def test_ratio_zero(self):
        with pytest.raises(ZeroDenominatorError):
            ratio(1, 0)

    def test_to_float(self):
        assert to_float(GaussianRational(Fraction(1, 4))) == 0.25
        assert to_float(0.5 + 0j) == 0.5
