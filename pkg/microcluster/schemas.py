"""Validated records exchanged between the protocols and the CLI."""
from __future__ import annotations

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

Command = Literal["table1", "table2", "table3", "formulas", "pairfuse", "sweep", "policy-search", "selftest"]
OutputFormat = Literal["text", "csv", "json"]


def _render_fraction(value: Fraction) -> str:
    return str(value)


# --- Run configuration ---


class PGrid(BaseModel):
    """Inclusive grid ``start:stop:steps``."""

    model_config = ConfigDict(frozen=True)

    start: float = Field(ge=0)
    stop: float = Field(ge=0)
    steps: int = Field(ge=1)

    @classmethod
    def parse(cls, text: str) -> PGrid:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"p-grid must read start:stop:steps, got {text!r}")
        start, stop, steps = parts
        return cls(start=float(start), stop=float(stop), steps=int(steps))

    @model_validator(mode="after")
    def _ordered(self) -> PGrid:
        if self.stop < self.start:
            raise ValueError("p-grid stop must not be below start")
        if self.steps == 1 and self.stop != self.start:
            raise ValueError("a single-step p-grid needs start == stop")
        return self

    def points(self) -> list[float]:
        """Grid points computed by index so that endpoints are exact."""
        if self.steps == 1:
            return [self.start]
        span = self.stop - self.start
        return [self.start + span * i / (self.steps - 1) for i in range(self.steps)]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    leaves: int | None = Field(default=None, ge=1)
    max_leaves: int | None = Field(default=None, ge=1)
    attempt: int | None = Field(default=None, ge=1)
    alpha: float | None = Field(default=None, ge=0, le=0.5)
    p: float | None = Field(default=None, ge=0, le=1)
    px: float | None = Field(default=None, ge=0, le=1)
    py: float | None = Field(default=None, ge=0, le=1)
    pz: float | None = Field(default=None, ge=0, le=1)
    policy: str = "survivor_only"
    noisy_failures: bool = False
    strategy: Literal["split", "joint"] = "split"
    backend: Literal["exact", "float"] = "exact"
    p_grid: PGrid | None = None
    leaves_set: tuple[int, ...] = (2, 3, 4, 5)
    attempts: tuple[int, ...] = (1, 2, 3, 4)
    rows: int = Field(default=5, ge=1)
    cols: int = Field(default=5, ge=1)
    selector: str | None = None
    out: str | None = None
    format: OutputFormat = "text"
    compare: bool = False
    quick: bool = False

    @field_validator("p_grid", mode="before")
    @classmethod
    def _grid(cls, value: object) -> object:
        if isinstance(value, str):
            return PGrid.parse(value)
        return value

    @field_validator("leaves_set", "attempts")
    @classmethod
    def _positive(cls, values: tuple[int, ...]) -> tuple[int, ...]:
        if not values:
            raise ValueError("at least one value is required")
        if any(v < 1 for v in values):
            raise ValueError("values must be at least 1")
        return tuple(values)

    @model_validator(mode="after")
    def _probabilities(self) -> RunConfig:
        fill = self.p if self.p is not None else 0.0
        total = sum(fill if v is None else v for v in (self.px, self.py, self.pz))
        if total > 1:
            raise ValueError("p_x + p_y + p_z must not exceed 1")
        if self.p_grid is not None and 3 * self.p_grid.stop > 1:
            raise ValueError("p-grid points must keep 3p <= 1")
        return self

    @property
    def has_numeric_noise(self) -> bool:
        return any(v is not None for v in (self.alpha, self.p, self.px, self.py, self.pz))


# --- Protocol results ---


class SweepRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    policy: str
    leaves: int
    attempt: int
    alpha: float
    p: float
    fidelity: float


class CellTarget(BaseModel):
    """A printed attempt-conditioned cell: exact coefficients per monomial."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    leaves: int
    attempt: int
    coefficients: dict[str, Fraction]

    @field_serializer("coefficients")
    def _dump(self, coefficients: dict[str, Fraction]) -> dict[str, str]:
        return {k: _render_fraction(v) for k, v in coefficients.items()}


class CoefficientReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    leaves: int
    attempt: int
    policy: str
    mode: Literal["series", "rational"] = "series"
    coefficients: dict[str, Fraction]

    @field_serializer("coefficients")
    def _dump(self, coefficients: dict[str, Fraction]) -> dict[str, str]:
        return {k: _render_fraction(v) for k, v in coefficients.items()}

    def coefficient(self, name: str) -> Fraction:
        return self.coefficients.get(name, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient("1")

    def render(self) -> str:
        """``1 - 5/2*alpha^2 - 8*p + ...`` with zero terms omitted."""
        parts: list[str] = []
        for name, value in self.coefficients.items():
            if value == 0:
                continue
            sign = "-" if value < 0 else "+"
            magnitude = abs(value)
            if name == "1":
                body = str(magnitude)
            elif magnitude == 1:
                body = name
            else:
                body = f"{magnitude}*{name}"
            if not parts:
                parts.append(f"-{body}" if sign == "-" else body)
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts) if parts else "0"


class PolicyScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    policy: str
    matches: int
    total: int
    constant_terms_ok: bool
    mismatches: list[str] = Field(default_factory=list)
    reports: list[CoefficientReport] = Field(default_factory=list)


class PolicySearchReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    best_policy: str
    renormalization: str = "fidelity divided by the actual, error-dependent success probability"
    scores: list[PolicyScore]

    def render(self) -> str:
        lines = [f"renormalization: {self.renormalization}", f"best policy: {self.best_policy}"]
        for rank, score in enumerate(self.scores, start=1):
            status = "ok" if score.constant_terms_ok else "BROKEN"
            lines.append(f"{rank}. {score.policy}: {score.matches}/{score.total} coefficients match (constant terms {status})")
            for report in score.reports:
                lines.append(f"   ({report.leaves},{report.attempt}) {report.render()}")
            for mismatch in score.mismatches:
                lines.append(f"   mismatch {mismatch}")
        return "\n".join(lines)
