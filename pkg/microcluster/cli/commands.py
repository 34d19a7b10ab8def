"""One function per CLI command.

Each command receives a validated :class:`RunConfig` and returns a
:class:`CommandResult`; rendering to text, CSV or JSON happens in
:mod:`microcluster.cli.main`.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from microcluster.cli.output import emit_csv, format_scalar, json_scalar, render_grid, sweep_json
from microcluster.cli.selftest import run_checks
from microcluster.config import settings
from microcluster.exceptions import ParameterError, UsageError
from microcluster.logging_config import get_logger
from microcluster.optics.noise import ErrorPlacementPolicy, NoiseModel
from microcluster.protocols.closed_forms import (
    TABLE2_PRINTED,
    TABLE3_CELLS,
    TABLE3_PRINTED,
    binomial_transform_table,
    reference_formulas,
    table1_row_verdict,
)
from microcluster.protocols.expansion import (
    MAX_EXPANSION_LEAVES,
    alpha_constancy,
    coefficient_expansion,
    policy_search,
)
from microcluster.protocols.microcluster import microcluster_fidelity
from microcluster.protocols.pair_fusion import PairFusionSpec, Strategy, fuse_pair
from microcluster.protocols.sweep import sweep_records
from microcluster.schemas import CoefficientReport, PGrid, RunConfig, SweepRecord

logger = get_logger(__name__)


@dataclass
class CommandResult:
    """Rendered forms of one command's output.

    ``records`` marks a sweep, whose CSV comes from :func:`emit_csv`.
    """

    text: str
    payload: Any
    csv_header: tuple[str, ...] | None = None
    csv_rows: list[tuple[str, ...]] = field(default_factory=list)
    exit_code: int = 0
    records: list[SweepRecord] | None = None


# ---------------------------------------------------------------------------
# Parameter helpers
# ---------------------------------------------------------------------------


def policy_from(cfg: RunConfig) -> ErrorPlacementPolicy:
    policy = ErrorPlacementPolicy.parse(cfg.policy)
    if cfg.noisy_failures and not policy.noisy_failures:
        policy = ErrorPlacementPolicy(policy.placement, True)
    return policy


def _exact(value: float | None) -> Fraction | None:
    # decimal flag values become the rational they spell
    return None if value is None else Fraction(str(value))


def numeric_noise(cfg: RunConfig) -> NoiseModel:
    """Noise from the numeric flags in the requested backend."""
    if cfg.backend == "float":
        alpha = float(cfg.alpha or 0.0)
        return NoiseModel.numeric(alpha, cfg.p, px=cfg.px, py=cfg.py, pz=cfg.pz)
    return NoiseModel.numeric(
        _exact(cfg.alpha) or 0,
        _exact(cfg.p),
        px=_exact(cfg.px),
        py=_exact(cfg.py),
        pz=_exact(cfg.pz),
    )


def _leaves_range(cfg: RunConfig, default_max: int) -> list[int]:
    if cfg.leaves is not None:
        return [cfg.leaves]
    return list(range(1, (cfg.max_leaves or default_max) + 1))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def table1(cfg: RunConfig) -> CommandResult:
    leaves = _leaves_range(cfg, 5)
    if cfg.has_numeric_noise or cfg.backend == "float":
        noise = numeric_noise(cfg)
        policy = policy_from(cfg)
        values = [(n, microcluster_fidelity(n, noise, policy)) for n in leaves]
        lines = [f"{n}: {format_scalar(v)}" for n, v in values]
        payload = [{"leaves": n, "fidelity": json_scalar(v)} for n, v in values]
        rows = [(str(n), format_scalar(v)) for n, v in values]
        return CommandResult("\n".join(lines), payload, ("leaves", "fidelity"), rows)

    lines, payload, rows = [], [], []
    for n in leaves:
        verdict = table1_row_verdict(n)
        lines.append(f"{n}: {verdict.simulated}")
        entry: dict[str, Any] = {"leaves": n, "fidelity": str(verdict.simulated)}
        if cfg.compare:
            lines.append(f"   printed:     {verdict.printed}")
            lines.append(f"   closed form: {verdict.closed_form}")
            lines.append(
                f"   matches printed: {_yes(verdict.matches_printed)}, "
                f"matches closed form: {_yes(verdict.matches_closed_form)}"
            )
            for diff in verdict.differing_terms():
                lines.append(f"   differs {diff}")
            entry.update(
                printed=str(verdict.printed),
                closed_form=str(verdict.closed_form),
                matches_printed=verdict.matches_printed,
                matches_closed_form=verdict.matches_closed_form,
                differences=verdict.differing_terms(),
            )
        payload.append(entry)
        rows.append((str(n), str(verdict.simulated)))
    return CommandResult("\n".join(lines), payload, ("leaves", "fidelity"), rows)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def table2(cfg: RunConfig) -> CommandResult:
    grid = binomial_transform_table(cfg.rows, cfg.cols)
    text = render_grid(grid)
    payload: dict[str, Any] = {"rows": cfg.rows, "cols": cfg.cols, "grid": grid}
    if cfg.compare:
        printed = [list(row[: cfg.cols]) for row in TABLE2_PRINTED[: cfg.rows]]
        overlap = [row[: len(printed[0])] for row in grid[: len(printed)]]
        same = overlap == printed
        text += f"\nmatches printed table: {_yes(same)}"
        payload["matches_printed"] = same
    rows = [tuple(str(v) for v in row) for row in grid]
    header = tuple(f"c{c}" for c in range(cfg.cols))
    return CommandResult(text, payload, header, rows)


def _table3_cells(cfg: RunConfig) -> list[tuple[int, int]]:
    if cfg.leaves is not None and cfg.leaves > MAX_EXPANSION_LEAVES:
        raise ParameterError("coefficient expansion is limited to four leaves", details={"leaves": cfg.leaves})
    if cfg.leaves is not None and cfg.attempt is not None:
        PairFusionSpec(cfg.leaves, cfg.attempt).validate()
        return [(cfg.leaves, cfg.attempt)]
    cells = list(TABLE3_CELLS)
    if cfg.leaves is not None:
        cells = [c for c in cells if c[0] == cfg.leaves]
    if cfg.attempt is not None:
        cells = [c for c in cells if c[1] == cfg.attempt]
        if not cells:
            PairFusionSpec(cfg.leaves or 1, cfg.attempt).validate()
    return cells


def table3(cfg: RunConfig) -> CommandResult:
    cells = _table3_cells(cfg)
    policy = policy_from(cfg)
    strategy = Strategy(cfg.strategy)
    reports = [
        coefficient_expansion(PairFusionSpec(n, k, policy=policy, strategy=strategy)) for n, k in cells
    ]
    lines = [f"policy: {policy.name}"]
    payload: dict[str, Any] = {"policy": policy.name, "cells": []}
    rows = []
    for report in reports:
        lines.append(f"({report.leaves},{report.attempt}) {report.render()}")
        cell = report.model_dump(mode="json")
        if cfg.compare:
            printed = TABLE3_PRINTED[(report.leaves, report.attempt)]
            agree = sum(report.coefficient(k) == v for k, v in printed.items())
            lines.append(f"   printed: {_render_printed(printed)} ({agree}/{len(printed)} coefficients agree)")
            cell["printed"] = {k: str(v) for k, v in printed.items()}
            cell["agreeing_coefficients"] = agree
        payload["cells"].append(cell)
        rows.append((str(report.leaves), str(report.attempt), *(str(v) for v in report.coefficients.values())))
    constancy = alpha_constancy(reports)
    if len({r.leaves for r in reports}) > 1:
        lines.append(
            "alpha^2 coefficient independent of leaves: "
            + ", ".join(f"attempt {k}: {_yes(ok)}" for k, ok in constancy.items())
        )
    payload["alpha_constancy"] = {str(k): ok for k, ok in constancy.items()}
    header = ("leaves", "attempt", *(reports[0].coefficients if reports else ()))
    return CommandResult("\n".join(lines), payload, header, rows)


def _render_printed(printed: dict[str, Fraction]) -> str:
    return CoefficientReport(leaves=0, attempt=0, policy="printed", coefficients=printed).render()


def formulas(cfg: RunConfig) -> CommandResult:
    if cfg.selector is None:
        raise UsageError("formulas needs --selector")
    alpha: Any = cfg.alpha
    p: Any = cfg.p
    if cfg.backend == "exact":
        alpha, p = _exact(alpha), _exact(p)
    value = reference_formulas(cfg.selector, leaves=cfg.leaves, alpha=alpha, p=p)
    text = f"{cfg.selector}: {format_scalar(value)}"
    payload = {"selector": cfg.selector, "leaves": cfg.leaves, "value": json_scalar(value)}
    return CommandResult(text, payload, ("selector", "value"), [(cfg.selector, format_scalar(value))])


def pairfuse(cfg: RunConfig) -> CommandResult:
    if cfg.leaves is None or cfg.attempt is None:
        raise UsageError("pairfuse needs --leaves and --attempt")
    spec = PairFusionSpec(
        cfg.leaves,
        cfg.attempt,
        numeric_noise(cfg),
        policy_from(cfg),
        Strategy(cfg.strategy),
    )
    spec.validate()
    result = fuse_pair(spec)
    text = f"leaves={cfg.leaves} attempt={cfg.attempt} policy={spec.policy.name} fidelity: {format_scalar(result.fidelity)}"
    payload = {
        "leaves": cfg.leaves,
        "attempt": cfg.attempt,
        "policy": spec.policy.name,
        "fidelity": json_scalar(result.fidelity),
    }
    rows = [(spec.policy.name, str(cfg.leaves), str(cfg.attempt), format_scalar(result.fidelity))]
    return CommandResult(text, payload, ("policy", "leaves", "attempt", "fidelity"), rows)


def sweep(cfg: RunConfig) -> CommandResult:
    grid = cfg.p_grid or PGrid.parse(settings.default_p_grid)
    alpha = settings.default_alpha if cfg.alpha is None else cfg.alpha
    records = sweep_records(alpha, grid.points(), cfg.leaves_set, cfg.attempts, policy_from(cfg))
    buffer = io.StringIO()
    emit_csv(records, buffer)
    return CommandResult(buffer.getvalue().rstrip("\n"), sweep_json(records), records=records)


def policy_search_command(cfg: RunConfig) -> CommandResult:
    report = policy_search(cfg.max_leaves or MAX_EXPANSION_LEAVES)
    return CommandResult(report.render(), report.model_dump(mode="json"))


def selftest(cfg: RunConfig) -> CommandResult:
    outcomes = run_checks(quick=cfg.quick)
    lines = [f"{'PASS' if o.passed else 'FAIL'} {o.name}" + ("" if o.passed else f": {o.detail}") for o in outcomes]
    failed = sum(not o.passed for o in outcomes)
    lines.append(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    payload = [{"name": o.name, "passed": o.passed, "detail": o.detail} for o in outcomes]
    rows = [(o.name, "pass" if o.passed else "fail") for o in outcomes]
    return CommandResult("\n".join(lines), payload, ("check", "status"), rows, exit_code=3 if failed else 0)


COMMANDS: dict[str, Callable[[RunConfig], CommandResult]] = {
    "table1": table1,
    "table2": table2,
    "table3": table3,
    "formulas": formulas,
    "pairfuse": pairfuse,
    "sweep": sweep,
    "policy-search": policy_search_command,
    "selftest": selftest,
}
