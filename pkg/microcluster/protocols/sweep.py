"""Float-backend fidelity sweeps over p for bonded microcluster pairs."""
from __future__ import annotations

import multiprocessing as mp
import time
from typing import Iterable, Sequence

from microcluster.algebra import to_float
from microcluster.config import settings
from microcluster.exceptions import ParameterError
from microcluster.logging_config import get_logger
from microcluster.optics.noise import DEFAULT_POLICY, ErrorPlacementPolicy, NoiseModel
from microcluster.protocols.pair_fusion import PairFusionSpec, fuse_pair
from microcluster.schemas import PGrid, SweepRecord

logger = get_logger(__name__)


def parse_p_grid(text: str) -> list[float]:
    """Points of an inclusive ``start:stop:steps`` grid."""
    try:
        grid = PGrid.parse(text)
    except ValueError as exc:
        raise ParameterError("invalid p-grid", details={"p_grid": text, "reason": str(exc)}) from None
    return grid.points()


def _sweep_point(job: tuple[str, int, int, float, float]) -> SweepRecord:
    policy, leaves, attempt, alpha, p = job
    noise = NoiseModel.numeric(alpha, p)
    result = fuse_pair(PairFusionSpec(leaves, attempt, noise, ErrorPlacementPolicy.parse(policy)))
    return SweepRecord(
        policy=policy,
        leaves=leaves,
        attempt=attempt,
        alpha=alpha,
        p=p,
        fidelity=to_float(result.fidelity),
    )


def sweep_jobs(
    alpha: float,
    p_grid: Sequence[float],
    leaves_set: Iterable[int],
    attempts: Iterable[int],
    policy: ErrorPlacementPolicy | str = DEFAULT_POLICY,
) -> list[tuple[str, int, int, float, float]]:
    """Valid (leaves, attempt, p) combinations in output order; attempt > leaves is omitted."""
    name = ErrorPlacementPolicy.parse(policy).name
    attempts = sorted(set(attempts))
    jobs = []
    for leaves in sorted(set(leaves_set)):
        for attempt in attempts:
            if attempt > leaves:
                continue
            for p in p_grid:
                jobs.append((name, leaves, attempt, float(alpha), float(p)))
    return jobs


def sweep_records(
    alpha: float,
    p_grid: Sequence[float],
    leaves_set: Iterable[int],
    attempts: Iterable[int],
    policy: ErrorPlacementPolicy | str = DEFAULT_POLICY,
    workers: int | None = None,
) -> list[SweepRecord]:
    """Fidelity records ordered by (leaves, attempt, p), independent of ``workers``."""
    if not p_grid:
        raise ParameterError("p-grid is empty")
    for p in p_grid:
        NoiseModel.numeric(alpha, p)
    jobs = sweep_jobs(alpha, p_grid, leaves_set, attempts, policy)
    workers = settings.workers if workers is None else workers
    started = time.perf_counter()
    if workers <= 1 or len(jobs) <= 1:
        records = [_sweep_point(job) for job in jobs]
    else:
        with mp.Pool(processes=min(workers, len(jobs))) as pool:
            records = pool.map(_sweep_point, jobs)
    logger.info(
        "Sweep finished",
        extra={
            "records": len(records),
            "workers": workers,
            "duration_ms": round((time.perf_counter() - started) * 1000, 2),
        },
    )
    return records
