"""The fixed variable set and monomial ordering."""
from __future__ import annotations

from enum import Enum
from typing import Mapping


class Variable(str, Enum):
    P_X = "p_x"
    P_Y = "p_y"
    P_Z = "p_z"
    ALPHA = "alpha"
    P = "p"
    Q = "q"

    @property
    def index(self) -> int:
        return VARIABLES.index(self)

    @classmethod
    def parse(cls, name: str | Variable) -> Variable:
        if isinstance(name, Variable):
            return name
        return cls(name)


VARIABLES: tuple[Variable, ...] = tuple(Variable)
NVARS = len(VARIABLES)

Monomial = tuple[int, ...]

ONE: Monomial = (0,) * NVARS


def monomial(powers: Mapping[Variable | str, int] | None = None) -> Monomial:
    exps = [0] * NVARS
    for var, exp in (powers or {}).items():
        if exp < 0:
            raise ValueError("negative exponents are not supported")
        exps[Variable.parse(var).index] += exp
    return tuple(exps)


def unit(var: Variable | str) -> Monomial:
    return monomial({var: 1})


def monomial_key(mono: Monomial) -> tuple:
    # graded lex: lower total degree first, then larger leading exponents first
    return (sum(mono), tuple(-e for e in mono))


def render_monomial(mono: Monomial) -> str:
    parts = []
    for var, exp in zip(VARIABLES, mono):
        if exp == 1:
            parts.append(var.value)
        elif exp > 1:
            parts.append(f"{var.value}^{exp}")
    return "*".join(parts)


def parse_monomial(text: str) -> Monomial:
    """Inverse of :func:`render_monomial`; ``"1"`` is the empty monomial."""
    text = text.strip()
    if text in ("", "1"):
        return ONE
    powers: dict[Variable, int] = {}
    for factor in text.split("*"):
        name, _, exp = factor.partition("^")
        var = Variable.parse(name.strip())
        powers[var] = powers.get(var, 0) + (int(exp) if exp else 1)
    return monomial(powers)
