"""Low-order coefficients of the pair-fusion fidelity and the placement search.

The attempt-conditioned fidelities are reported to first order in p and
second order in alpha. The default mode carries truncated series through
the exact pipeline, which yields the Taylor coefficients directly; the
rational mode forms the full rational function first and expands it.
"""
from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import replace
from fractions import Fraction
from typing import Any, Iterable, Literal

from microcluster.algebra import TruncatedSeries, parse_monomial, series_expand
from microcluster.config import settings
from microcluster.exceptions import DomainError, ParameterError
from microcluster.logging_config import get_logger
from microcluster.optics.noise import TABLE3_CAPS, ErrorPlacementPolicy, NoiseModel
from microcluster.protocols.closed_forms import TABLE3_CELLS, TABLE3_MONOMIALS, TABLE3_PRINTED
from microcluster.protocols.pair_fusion import PairFusionSpec, fuse_pair
from microcluster.schemas import CellTarget, CoefficientReport, PolicyScore, PolicySearchReport

logger = get_logger(__name__)

Mode = Literal["series", "rational"]

MAX_EXPANSION_LEAVES = 4


def _coefficients(value: Any) -> dict[str, Fraction]:
    if not isinstance(value, TruncatedSeries):
        value = series_expand(value, TABLE3_CAPS)
    out: dict[str, Fraction] = {}
    for name in TABLE3_MONOMIALS:
        coeff = value.coefficient(parse_monomial(name))
        if not coeff.is_real():
            raise DomainError("fidelity coefficient is not real", details={"monomial": name, "value": str(coeff)})
        out[name] = coeff.real_fraction()
    return out


def coefficient_expansion(spec: PairFusionSpec, mode: Mode = "series") -> CoefficientReport:
    """Expand the exact pair-fusion fidelity about p = alpha = 0.

    The noise of ``spec`` is replaced by equiprobable symbolic noise; only
    the cell, policy and strategy are taken from it.
    """
    if spec.leaves > MAX_EXPANSION_LEAVES:
        raise ParameterError(
            "coefficient expansion is limited to four leaves",
            details={"leaves": spec.leaves},
        )
    if mode == "series":
        noise = NoiseModel.series(TABLE3_CAPS)
    elif mode == "rational":
        noise = NoiseModel.symbolic(equiprobable=True)
    else:
        raise ParameterError(f"unknown expansion mode {mode!r}")
    started = time.perf_counter()
    result = fuse_pair(replace(spec, noise=noise))
    report = CoefficientReport(
        leaves=spec.leaves,
        attempt=spec.attempt,
        policy=spec.policy.name,
        mode=mode,
        coefficients=_coefficients(result.fidelity),
    )
    logger.info(
        "Coefficients expanded",
        extra={
            "leaves": spec.leaves,
            "attempt": spec.attempt,
            "policy": spec.policy.name,
            "mode": mode,
            "duration_ms": round((time.perf_counter() - started) * 1000, 2),
        },
    )
    return report


def _expand_cell(job: tuple[int, int, str, str]) -> CoefficientReport:
    leaves, attempt, policy, mode = job
    spec = PairFusionSpec(leaves, attempt, policy=ErrorPlacementPolicy.parse(policy))
    return coefficient_expansion(spec, mode)  # type: ignore[arg-type]


def expand_cells(jobs: list[tuple[int, int, str, str]], workers: int | None = None) -> list[CoefficientReport]:
    """Expand every job, preserving job order whatever the worker count."""
    workers = settings.workers if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        return [_expand_cell(job) for job in jobs]
    with mp.Pool(processes=min(workers, len(jobs))) as pool:
        return pool.map(_expand_cell, jobs)


def table3_targets(max_leaves: int = MAX_EXPANSION_LEAVES) -> list[CellTarget]:
    return [
        CellTarget(leaves=n, attempt=k, coefficients=TABLE3_PRINTED[(n, k)])
        for n, k in TABLE3_CELLS
        if n <= max_leaves
    ]


def _score(policy: ErrorPlacementPolicy, reports: list[CoefficientReport], targets: list[CellTarget]) -> PolicyScore:
    matches = 0
    total = 0
    mismatches = []
    for report, target in zip(reports, targets):
        for name in TABLE3_MONOMIALS:
            total += 1
            simulated, printed = report.coefficient(name), target.coefficients[name]
            if simulated == printed:
                matches += 1
            else:
                mismatches.append(f"({target.leaves},{target.attempt}) {name}: simulated {simulated}, printed {printed}")
    return PolicyScore(
        policy=policy.name,
        matches=matches,
        total=total,
        constant_terms_ok=all(r.constant_term == 1 for r in reports),
        mismatches=mismatches,
        reports=reports,
    )


def policy_search(
    max_leaves: int = MAX_EXPANSION_LEAVES,
    policies: Iterable[ErrorPlacementPolicy] | None = None,
    *,
    mode: Mode = "series",
    workers: int | None = None,
) -> PolicySearchReport:
    """Score every error-placement policy against the printed attempt table.

    Ties keep the enumeration order of :meth:`ErrorPlacementPolicy.all_policies`.
    """
    if not 1 <= max_leaves <= MAX_EXPANSION_LEAVES:
        raise ParameterError("max_leaves must lie in 1..4", details={"max_leaves": max_leaves})
    policies = list(policies) if policies is not None else ErrorPlacementPolicy.all_policies()
    targets = table3_targets(max_leaves)
    jobs = [(t.leaves, t.attempt, policy.name, mode) for policy in policies for t in targets]
    reports = expand_cells(jobs, workers)
    scores = []
    for i, policy in enumerate(policies):
        chunk = reports[i * len(targets) : (i + 1) * len(targets)]
        scores.append(_score(policy, chunk, targets))
    ranked = sorted(enumerate(scores), key=lambda item: (-item[1].matches, item[0]))
    ordered = [score for _, score in ranked]
    logger.info(
        "Policy search finished",
        extra={"best_policy": ordered[0].policy, "matches": ordered[0].matches, "total": ordered[0].total},
    )
    return PolicySearchReport(best_policy=ordered[0].policy, scores=ordered)


def alpha_constancy(reports: Iterable[CoefficientReport]) -> dict[int, bool]:
    """Whether the alpha^2 coefficient depends only on the attempt index.

    Maps each attempt to True when every leaf count gives the same value.
    """
    by_attempt: dict[int, set[Fraction]] = {}
    for report in reports:
        by_attempt.setdefault(report.attempt, set()).add(report.coefficient("alpha^2"))
    return {attempt: len(values) == 1 for attempt, values in sorted(by_attempt.items())}
