"""Closed-form fidelity laws and the printed reference tables.

The printed tables are kept verbatim (including the sign of the
``q p_z^4`` term of the six-leaf row) so that simulated results can be
compared against them rather than assumed.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Any, NamedTuple

from microcluster.algebra import (
    Polynomial,
    RationalFunction,
    Variable,
    monomial,
    series_expand,
)
from microcluster.exceptions import ParameterError, UsageError
from microcluster.logging_config import get_logger
from microcluster.optics.fusion import success_probability
from microcluster.optics.noise import NoiseModel
from microcluster.protocols.microcluster import (
    cached_microcluster,
    microcluster_fidelity,
    polynomial_fidelity,
)
from microcluster.register.qubits import QubitFactory

logger = get_logger(__name__)

_p = Polynomial.variable(Variable.P)
_alpha = Polynomial.variable(Variable.ALPHA)


def _qpz(*terms: tuple[int, int, int]) -> Polynomial:
    """A polynomial from (coefficient, power of q, power of p_z) triples."""
    return Polynomial({monomial({Variable.Q: a, Variable.P_Z: b}): c for c, a, b in terms})


TABLE1_PRINTED: dict[int, Polynomial] = {
    1: Polynomial.one(),
    2: _qpz((-1, 1, 0), (-1, 0, 1)),
    3: _qpz((1, 2, 0), (2, 1, 1), (2, 0, 2)),
    4: _qpz((-1, 3, 0), (-3, 2, 1), (-6, 1, 2), (-4, 0, 3)),
    5: _qpz((1, 4, 0), (4, 3, 1), (12, 2, 2), (16, 1, 3), (8, 0, 4)),
    6: _qpz((-1, 5, 0), (-5, 4, 1), (-20, 3, 2), (-40, 2, 3), (40, 1, 4), (-16, 0, 5)),
}

TABLE2_PRINTED: tuple[tuple[int, ...], ...] = (
    (1, 1, 2, 4, 8),
    (1, 2, 6, 16, 40),
    (1, 3, 12, 40, 120),
    (1, 4, 20, 80, 280),
    (1, 5, 30, 140, 560),
)

# (leaves, attempt) -> coefficients of 1, p, alpha, alpha^2, alpha*p, alpha^2*p
TABLE3_MONOMIALS: tuple[str, ...] = ("1", "p", "alpha", "alpha^2", "alpha*p", "alpha^2*p")


def _cell(p: int, alpha_sq: Fraction, alpha_p: int, alpha_sq_p: int) -> dict[str, Fraction]:
    return {
        "1": Fraction(1),
        "p": Fraction(p),
        "alpha": Fraction(0),
        "alpha^2": Fraction(alpha_sq),
        "alpha*p": Fraction(alpha_p),
        "alpha^2*p": Fraction(alpha_sq_p),
    }


TABLE3_PRINTED: dict[tuple[int, int], dict[str, Fraction]] = {
    (1, 1): _cell(-8, Fraction(-5, 2), 0, 28),
    (2, 1): _cell(-12, Fraction(-5, 2), 8, 40),
    (2, 2): _cell(-14, Fraction(-6), 0, 142),
    (3, 1): _cell(-16, Fraction(-5, 2), 24, 28),
    (3, 2): _cell(-18, Fraction(-6), 8, 192),
    (3, 3): _cell(-20, Fraction(-23, 2), 0, 424),
    (4, 1): _cell(-20, Fraction(-5, 2), 48, -24),
    (4, 2): _cell(-22, Fraction(-6), 24, 218),
    (4, 3): _cell(-24, Fraction(-23, 2), 8, 536),
    (4, 4): _cell(-26, Fraction(-19), 0, 954),
}

TABLE3_CELLS: tuple[tuple[int, int], ...] = tuple(sorted(TABLE3_PRINTED))


# ---------------------------------------------------------------------------
# Microcluster laws
# ---------------------------------------------------------------------------


def table1_coefficient(n: int, k: int) -> int:
    """Magnitude of the ``q^(n-1-k) p_z^k`` coefficient of the n-leaf fidelity."""
    if k == 0:
        return 1
    return 2 ** (k - 1) * comb(n - 1, k)


def closed_form_table1(n: int) -> Polynomial:
    """The n-leaf microcluster fidelity in (q, p_z) from the binomial-transform pattern."""
    if n < 1:
        raise ParameterError("a microcluster needs at least one leaf", details={"leaves": n})
    sign = -1 if (n - 1) % 2 else 1
    return _qpz(*((sign * table1_coefficient(n, k), n - 1 - k, k) for k in range(n)))


def table1_magnitudes(poly: Polynomial, n: int) -> list[int]:
    """|coefficients| of ``poly`` ordered by increasing power of p_z."""
    out = []
    for k in range(n):
        coeff = poly.coefficient({Variable.Q: n - 1 - k, Variable.P_Z: k})
        out.append(abs(int(coeff.real_fraction())))
    return out


def binomial_transform_entry(r: int, c: int) -> int:
    if c == 0:
        return 1
    return 2 ** (c - 1) * factorial(c + r - 1) // (factorial(c) * factorial(r - 1))


def binomial_transform_table(rows: int, cols: int) -> list[list[int]]:
    """The square array of binomial transforms; rows start at 1, columns at 0."""
    if rows < 1 or cols < 1:
        raise ParameterError("table dimensions must be at least 1", details={"rows": rows, "cols": cols})
    return [[binomial_transform_entry(r, c) for c in range(cols)] for r in range(1, rows + 1)]


def antidiagonal(n: int, grid: list[list[int]] | None = None) -> list[int]:
    """Cells (r = n - c, c) for c = 0..n-1, read bottom-left to top-right."""
    if n < 1:
        raise ParameterError("antidiagonal index must be at least 1", details={"n": n})
    if grid is None:
        return [binomial_transform_entry(n - c, c) for c in range(n)]
    if len(grid) < n or any(len(row) < n for row in grid[:n]):
        raise ParameterError("grid too small for the antidiagonal", details={"n": n})
    return [grid[n - c - 1][c] for c in range(n)]


def eq2() -> RationalFunction:
    """Two-leaf fidelity under beam-splitter imperfection alone."""
    return RationalFunction((1 - _alpha) ** 2, 1 + 2 * (_alpha**2 - _alpha))


def eq3(n: int) -> RationalFunction:
    """n-leaf fidelity under beam-splitter imperfection alone."""
    if n < 1:
        raise ParameterError("a microcluster needs at least one leaf", details={"leaves": n})
    return eq2() ** (n - 1)


def first_order_equiprobable(n: int) -> Polynomial:
    if n < 1:
        raise ParameterError("a microcluster needs at least one leaf", details={"leaves": n})
    return 1 - 3 * (n - 1) * _p


def first_order_coefficient(value: Any, variable: Variable = Variable.P) -> Fraction:
    """Coefficient of ``variable`` in the expansion of ``value`` about zero."""
    series = series_expand(value, {variable: 1})
    return series.coefficient({variable: 1}).real_fraction()


def pipeline_success_probability(n: int, alpha: Any = 0) -> Any:
    """Success probability of the first bonding attempt between two n-leaf microclusters."""
    noise = NoiseModel(alpha)
    noise.validate_numeric()
    base = cached_microcluster(n, noise)
    a = base
    b = base.relabeled(QubitFactory("sp-"))
    rho = a.state.tensor(b.state)
    return success_probability(rho, a.newest_leaf, b.newest_leaf, noise.alpha)


SELECTORS = ("eq2", "eq3", "first_order_equiprobable", "success_probability")


def reference_formulas(
    selector: str,
    *,
    leaves: int | None = None,
    alpha: Any = None,
    p: Any = None,
) -> Any:
    """The named closed form, evaluated when a parameter value is given."""
    if selector == "eq2":
        value: Any = eq2()
    elif selector == "eq3":
        value = eq3(2 if leaves is None else leaves)
    elif selector == "first_order_equiprobable":
        value = first_order_equiprobable(2 if leaves is None else leaves)
    elif selector == "success_probability":
        a = _alpha if alpha is None else alpha
        return pipeline_success_probability(1 if leaves is None else leaves, a)
    else:
        raise UsageError(
            f"unknown selector {selector!r}",
            details={"expected": list(SELECTORS)},
        )
    point: dict[Variable, Any] = {}
    if alpha is not None:
        point[Variable.ALPHA] = alpha
    if p is not None:
        point[Variable.P] = p
    if point:
        return value.evaluate(point)
    return value


class RowVerdict(NamedTuple):
    leaves: int
    simulated: Polynomial
    closed_form: Polynomial
    printed: Polynomial

    @property
    def matches_closed_form(self) -> bool:
        return self.simulated == self.closed_form

    @property
    def matches_printed(self) -> bool:
        return self.simulated == self.printed

    def differing_terms(self) -> list[str]:
        """Monomials where the simulation and the printed row disagree."""
        out = []
        monos = {m for m, _ in self.simulated.sorted_terms()} | {m for m, _ in self.printed.sorted_terms()}
        for mono in sorted(monos, reverse=True):
            sim, printed = self.simulated.coefficient(mono), self.printed.coefficient(mono)
            if not sim == printed:
                name = str(Polynomial({mono: 1}))
                out.append(f"{name}: printed {printed}, simulated {sim}")
        return out


def simulated_table1_row(n: int) -> Polynomial:
    """Exact n-leaf fidelity with p_x = p_y = p, rewritten in (q, p_z)."""
    noise = NoiseModel.symbolic(alpha=False, equal_xy=True)
    return polynomial_fidelity(microcluster_fidelity(n, noise, substitute_q=True))


def table1_row_verdict(n: int) -> RowVerdict:
    printed = TABLE1_PRINTED.get(n, closed_form_table1(n))
    verdict = RowVerdict(n, simulated_table1_row(n), closed_form_table1(n), printed)
    logger.info(
        "Table row arbitrated",
        extra={
            "leaves": n,
            "matches_closed_form": verdict.matches_closed_form,
            "matches_printed": verdict.matches_printed,
        },
    )
    return verdict


def table1_row6_verdict() -> RowVerdict:
    return table1_row_verdict(6)
