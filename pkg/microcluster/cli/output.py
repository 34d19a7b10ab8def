"""Deterministic rendering of command results."""
from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Iterator, Sequence

from pydantic import BaseModel

from microcluster.algebra import GaussianRational, Polynomial, RationalFunction, TruncatedSeries
from microcluster.config import settings
from microcluster.schemas import SweepRecord

CSV_HEADER = ("policy", "leaves", "attempt", "alpha", "p", "fidelity")


def format_float(value: float, digits: int | None = None) -> str:
    return format(float(value), f".{digits or settings.float_digits}g")


def format_scalar(value: Any) -> str:
    """Canonical text for any scalar the protocols return."""
    if isinstance(value, (Polynomial, RationalFunction, TruncatedSeries)):
        return str(value)
    if isinstance(value, GaussianRational):
        return str(value)
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, complex):
        if value.imag == 0:
            return format_float(value.real)
        return f"{format_float(value.real)}{value.imag:+.{settings.float_digits}g}i"
    return format_float(value)


def json_scalar(value: Any) -> Any:
    if isinstance(value, float):
        return float(format_float(value))
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    return format_scalar(value)


@contextmanager
def open_output(path: str | None, stdout: IO[str] | None = None) -> Iterator[IO[str]]:
    """The destination stream; files are written with LF line endings."""
    if path is None or path == "-":
        yield stdout or sys.stdout
        return
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        yield handle


def emit_csv(records: Sequence[SweepRecord], destination: IO[str]) -> None:
    destination.write(",".join(CSV_HEADER) + "\n")
    for r in records:
        row = (
            r.policy,
            str(r.leaves),
            str(r.attempt),
            format_float(r.alpha),
            format_float(r.p),
            format_float(r.fidelity),
        )
        destination.write(",".join(row) + "\n")


def emit_json(payload: Any, destination: IO[str]) -> None:
    """Indented JSON with sorted keys, newline-terminated."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, list) and payload and isinstance(payload[0], BaseModel):
        payload = [item.model_dump(mode="json") for item in payload]
    destination.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def sweep_json(records: Sequence[SweepRecord]) -> list[dict[str, Any]]:
    """Sweep records with floats rounded as in the CSV output."""
    return [
        {
            "policy": r.policy,
            "leaves": r.leaves,
            "attempt": r.attempt,
            "alpha": json_scalar(r.alpha),
            "p": json_scalar(r.p),
            "fidelity": json_scalar(r.fidelity),
        }
        for r in records
    ]


def render_grid(grid: Sequence[Sequence[int]]) -> str:
    width = max((len(str(v)) for row in grid for v in row), default=1)
    return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in grid)
