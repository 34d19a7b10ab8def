"""Fusion error parameters, error placement policies and the Pauli channel."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

from microcluster.algebra import GaussianRational, Polynomial, TruncatedSeries, Variable, make_caps
from microcluster.exceptions import ParameterError, UsageError
from microcluster.register.density import Backend, DensityOperator, Representation
from microcluster.register.operators import I, X, Y, Z
from microcluster.register.qubits import QubitId
from microcluster.register.state import locate

_NUMBER_TYPES = (int, Fraction, GaussianRational, float)

# attempt-table truncation: first order in p, second order in alpha
TABLE3_CAPS = make_caps({Variable.P: 1, Variable.ALPHA: 2})


class ErrorPlacement(str, Enum):
    SURVIVOR_ONLY = "survivor_only"
    BOTH_FUSION_PHOTONS = "both_fusion_photons"
    SURVIVOR_PLUS_ROOTS = "survivor_plus_roots"
    ALL_CLUSTER_PHOTONS = "all_cluster_photons"


@dataclass(frozen=True)
class ErrorPlacementPolicy:
    """Where Pauli channels act around a fusion.

    The default (survivor only, silent failures) is the placement that
    reproduces the microcluster construction results.
    """

    placement: ErrorPlacement = ErrorPlacement.SURVIVOR_ONLY
    noisy_failures: bool = False

    @property
    def name(self) -> str:
        suffix = "+noisy_failures" if self.noisy_failures else ""
        return f"{self.placement.value}{suffix}"

    @classmethod
    def parse(cls, text: str | ErrorPlacementPolicy) -> ErrorPlacementPolicy:
        if isinstance(text, ErrorPlacementPolicy):
            return text
        raw = text.strip().lower().replace("-", "_")
        noisy = False
        if raw.endswith("+noisy_failures"):
            noisy = True
            raw = raw[: -len("+noisy_failures")]
        try:
            return cls(ErrorPlacement(raw), noisy)
        except ValueError:
            known = ", ".join(p.value for p in ErrorPlacement)
            raise UsageError(f"unknown policy {text!r}; expected one of {known}") from None

    @classmethod
    def all_policies(cls) -> list[ErrorPlacementPolicy]:
        return [cls(placement, noisy) for placement in ErrorPlacement for noisy in (False, True)]

    def __str__(self) -> str:
        return self.name


DEFAULT_POLICY = ErrorPlacementPolicy()


def _is_number(value: Any) -> bool:
    return isinstance(value, _NUMBER_TYPES)


def _exact(value: Any) -> Any:
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    return value


@dataclass(frozen=True)
class NoiseModel:
    """The error parameters (alpha, p_x, p_y, p_z).

    Each parameter may be a number (exact or float), a :class:`Polynomial`
    in the symbolic variables, or a :class:`TruncatedSeries`. Range checks
    apply only to numeric values.
    """

    alpha: Any = 0
    p_x: Any = 0
    p_y: Any = 0
    p_z: Any = 0
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        names = ("alpha", "p_x", "p_y", "p_z")
        inexact = any(isinstance(getattr(self, n), float) for n in names)
        for name in names:
            value = getattr(self, name)
            if inexact and _is_number(value):
                value = float(value)
            object.__setattr__(self, name, value if inexact else _exact(value))

    # --- constructors ---------------------------------------------------

    @classmethod
    def ideal(cls) -> NoiseModel:
        return cls(label="ideal")

    @classmethod
    def symbolic(
        cls,
        *,
        alpha: bool = True,
        pauli: bool = True,
        equal_xy: bool = False,
        equiprobable: bool = False,
    ) -> NoiseModel:
        """Polynomial variables for the chosen parameters.

        ``equal_xy`` sets p_x = p_y = p; ``equiprobable`` also sets p_z = p.
        """
        a = Polynomial.variable(Variable.ALPHA) if alpha else 0
        if not pauli:
            return cls(a, label="symbolic")
        p = Polynomial.variable(Variable.P)
        if equiprobable:
            return cls(a, p, p, p, label="symbolic")
        if equal_xy:
            return cls(a, p, p, Polynomial.variable(Variable.P_Z), label="symbolic")
        return cls(
            a,
            Polynomial.variable(Variable.P_X),
            Polynomial.variable(Variable.P_Y),
            Polynomial.variable(Variable.P_Z),
            label="symbolic",
        )

    @classmethod
    def series(cls, caps: Mapping[Variable | str, int] | tuple[int, ...] = TABLE3_CAPS) -> NoiseModel:
        """Equiprobable p and alpha as truncated series."""
        caps = make_caps(caps)
        p = TruncatedSeries.variable(Variable.P, caps)
        a = TruncatedSeries.variable(Variable.ALPHA, caps)
        return cls(a, p, p, p, label="series")

    @classmethod
    def numeric(
        cls,
        alpha: Any = 0.0,
        p: Any = None,
        *,
        px: Any = None,
        py: Any = None,
        pz: Any = None,
    ) -> NoiseModel:
        """Numeric parameters; ``p`` fills every unset Pauli probability."""
        fill = 0 if p is None else p
        model = cls(
            alpha,
            fill if px is None else px,
            fill if py is None else py,
            fill if pz is None else pz,
            label="numeric",
        )
        model.validate_numeric()
        return model

    # --- inspection -----------------------------------------------------

    @property
    def values(self) -> tuple[Any, Any, Any, Any]:
        return (self.alpha, self.p_x, self.p_y, self.p_z)

    @property
    def p_identity(self) -> Any:
        return 1 - self.p_x - self.p_y - self.p_z

    @property
    def backend(self) -> Backend:
        return Backend.FLOAT if any(isinstance(v, float) for v in self.values) else Backend.EXACT

    @property
    def default_representation(self) -> Representation:
        if self.backend is Backend.FLOAT:
            return Representation.DENSE
        if any(isinstance(v, TruncatedSeries) for v in self.values):
            return Representation.DENSE
        return Representation.BRANCHES

    @property
    def has_pauli_noise(self) -> bool:
        return not all(v == 0 for v in (self.p_x, self.p_y, self.p_z))

    @property
    def kind(self) -> str:
        if all(v == 0 for v in self.values):
            return "ideal"
        if any(isinstance(v, TruncatedSeries) for v in self.values):
            return "series"
        if any(isinstance(v, Polynomial) for v in self.values):
            return "symbolic"
        return "numeric"

    def validate_numeric(self) -> None:
        """Range checks on the numeric parameters; symbolic ones are skipped."""
        alpha, px, py, pz = self.values
        if _is_number(alpha) and not 0 <= _real(alpha) <= Fraction(1, 2):
            raise ParameterError("alpha must lie in [0, 1/2]", details={"alpha": str(alpha)})
        probs = [(n, v) for n, v in zip(("p_x", "p_y", "p_z"), (px, py, pz)) if _is_number(v)]
        for name, value in probs:
            if _real(value) < 0:
                raise ParameterError(f"{name} must be nonnegative", details={name: str(value)})
        if len(probs) == 3 and sum(_real(v) for _, v in probs) > 1:
            raise ParameterError(
                "p_x + p_y + p_z must not exceed 1",
                details={n: str(v) for n, v in probs},
            )

    # exact zero and float zero compare equal; built states must not be shared
    def _identity(self) -> tuple[Any, ...]:
        return (self.backend, tuple(type(v) for v in self.values), self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NoiseModel):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self) -> int:
        return hash(self._identity())

    def pauli_terms(self) -> list[tuple[Any, Any]]:
        return [(self.p_identity, I), (self.p_x, X), (self.p_y, Y), (self.p_z, Z)]

    def swapped_xy(self) -> NoiseModel:
        return NoiseModel(self.alpha, self.p_y, self.p_x, self.p_z, label=self.label)

    def without_alpha(self) -> NoiseModel:
        return NoiseModel(0, self.p_x, self.p_y, self.p_z, label=self.label)

    def without_pauli(self) -> NoiseModel:
        return NoiseModel(self.alpha, label=self.label)


def _real(value: Any) -> Any:
    if isinstance(value, GaussianRational):
        return value.real_fraction()
    return value


def pauli_channel(rho: DensityOperator, q: QubitId, noise: NoiseModel) -> DensityOperator:
    """``(1 - p_x - p_y - p_z) rho + sum_j p_j s_j rho s_j`` on qubit ``q``."""
    if not noise.has_pauli_noise:
        locate(rho.qubits, q)
        return rho
    return rho.channel(q, noise.pauli_terms())
