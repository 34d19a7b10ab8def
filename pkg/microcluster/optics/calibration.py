"""Zero-error calibration of the byproduct table.

Every measurement branch of the ideal primitives must land on the
canonical state with fidelity exactly 1. Failing slots are repaired by a
search over the single-qubit Clifford group.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Iterator

from microcluster.algebra.gaussian import GaussianRational
from microcluster.exceptions import CalibrationError
from microcluster.logging_config import get_logger
from microcluster.optics.fusion import star_state, success_branches
from microcluster.optics.measurement import (
    DEFAULT_BYPRODUCTS,
    ByproductTable,
    joined_pair_state,
    y_branches,
    z_branches,
)
from microcluster.register.density import BranchEnsemble, DensityOperator, fidelity
from microcluster.register.operators import H, LocalOperator, PAULIS, S
from microcluster.register.qubits import QubitFactory, QubitRole

logger = get_logger(__name__)

SLOTS = ("fusion_minus", "leaf_one", "y_minus")

PipelineCheck = Callable[[ByproductTable], list[str]]


# ---------------------------------------------------------------------------
# Clifford group
# ---------------------------------------------------------------------------


def _projective_key(op: LocalOperator) -> tuple[GaussianRational, ...]:
    flat = [GaussianRational.coerce(v) for v in op.matrix.flat]
    lead = next(v for v in flat if not v.is_zero())
    return tuple(v / lead for v in flat)


def _normalized(op: LocalOperator, name: str) -> LocalOperator:
    key = _projective_key(op)
    return LocalOperator.from_rows(name, [list(key[0:2]), list(key[2:4])])


def clifford_group() -> list[LocalOperator]:
    """The 24 single-qubit Cliffords modulo phase, Paulis first.

    The rest follow in breadth-first order over words in H and S.
    """
    seen: dict[tuple[GaussianRational, ...], LocalOperator] = {}
    for name, pauli in PAULIS.items():
        seen[_projective_key(pauli)] = _normalized(pauli, name)
    queue: deque[tuple[str, LocalOperator]] = deque([("", PAULIS["I"])])
    visited = {_projective_key(PAULIS["I"])}
    while queue:
        word, op = queue.popleft()
        for gen_name, gen in (("H", H), ("S", S)):
            product = gen @ op
            key = _projective_key(product)
            if key in visited:
                continue
            visited.add(key)
            new_word = gen_name + word
            if key not in seen:
                seen[key] = _normalized(product, new_word)
            queue.append((new_word, product))
    group = list(seen.values())
    if len(group) != 24:
        raise CalibrationError("Clifford enumeration did not close", details={"size": len(group)})
    return group


# ---------------------------------------------------------------------------
# Branch probes
# ---------------------------------------------------------------------------


def _is_one(value: object) -> bool:
    return value == 1


def _nonzero_branches(branches: Iterator[tuple[object, DensityOperator]]) -> Iterator[tuple[object, DensityOperator]]:
    for key, branch in branches:
        if not branch.trace() == 0:
            yield key, branch


def fusion_failures(table: ByproductTable, max_leaves: int = 4) -> list[str]:
    """Success branches growing an ideal star by one leaf."""
    failures = []
    factory = QubitFactory("cal-f")
    for n in range(1, max_leaves):
        root = factory.fresh(QubitRole.ROOT)
        leaves = [factory.fresh(QubitRole.LEAF) for _ in range(n)]
        half, partner = factory.fresh(QubitRole.EPR_HALF), factory.fresh(QubitRole.LEAF)
        rho = BranchEnsemble.from_pure(star_state(root, leaves)).tensor(
            BranchEnsemble.from_pure(star_state(half, [partner]))
        )
        survivor = factory.fresh(QubitRole.ROOT)
        target = star_state(survivor, [*leaves, partner])
        for (measured, sign), branch in _nonzero_branches(
            success_branches(rho, root, half, 0, survivor, table)
        ):
            if not _is_one(fidelity(target, branch)):
                failures.append(f"fusion n={n} measured={measured} outcome={sign:+d}")
    return failures


def leaf_failures(table: ByproductTable, max_leaves: int = 4) -> list[str]:
    """z outcomes on each leaf of an ideal star."""
    failures = []
    factory = QubitFactory("cal-z")
    for n in range(1, max_leaves + 1):
        root = factory.fresh(QubitRole.ROOT)
        leaves = [factory.fresh(QubitRole.LEAF) for _ in range(n)]
        rho = BranchEnsemble.from_pure(star_state(root, leaves))
        for i, leaf in enumerate(leaves):
            target = star_state(root, leaves[:i] + leaves[i + 1:])
            for bit, branch in _nonzero_branches(z_branches(rho, leaf, root, table)):
                if not _is_one(fidelity(target, branch)):
                    failures.append(f"leaf n={n} leaf={i} outcome={bit}")
    return failures


def y_failures(table: ByproductTable) -> list[str]:
    """y outcomes on the center of an ideal 3-chain."""
    factory = QubitFactory("cal-y")
    center = factory.fresh(QubitRole.CONNECTOR)
    root_a, root_b = factory.fresh(QubitRole.ROOT), factory.fresh(QubitRole.ROOT)
    rho = BranchEnsemble.from_pure(star_state(center, [root_a, root_b]))
    target = joined_pair_state(root_a, root_b)
    return [
        f"y outcome={sign:+d}"
        for sign, branch in _nonzero_branches(y_branches(rho, center, root_a, root_b, table))
        if not _is_one(fidelity(target, branch))
    ]


def verify_byproducts(
    table: ByproductTable = DEFAULT_BYPRODUCTS,
    max_leaves: int = 4,
    pipeline_check: PipelineCheck | None = None,
) -> list[str]:
    """Names of the ideal branches that miss the canonical state."""
    failures = fusion_failures(table, max_leaves) + leaf_failures(table, max_leaves) + y_failures(table)
    if not failures and pipeline_check is not None:
        failures += pipeline_check(table)
    return failures


def _slot_failures(slot: str, table: ByproductTable, max_leaves: int) -> list[str]:
    if slot == "fusion_minus":
        return fusion_failures(table, max_leaves)
    if slot == "leaf_one":
        return leaf_failures(table, max_leaves)
    return y_failures(table)


def _candidates(slot: str, group: list[LocalOperator]) -> Iterator[object]:
    if slot == "y_minus":
        for a in group:
            for b in group:
                yield (a, b)
    else:
        yield from group


def calibrate_byproducts(
    table: ByproductTable = DEFAULT_BYPRODUCTS,
    max_leaves: int = 4,
    pipeline_check: PipelineCheck | None = None,
) -> ByproductTable:
    """Return a table under which every ideal branch has fidelity 1.

    The given table is returned unchanged when it already verifies. Each
    failing slot is replaced by the first Clifford (or Clifford pair) in
    enumeration order that repairs it, so the result is deterministic.
    """
    group: list[LocalOperator] | None = None
    for slot in SLOTS:
        if not _slot_failures(slot, table, max_leaves):
            continue
        logger.warning("Byproduct slot failed verification", extra={"slot": slot})
        group = group or clifford_group()
        for candidate in _candidates(slot, group):
            trial = table.with_slot(slot, candidate)
            if not _slot_failures(slot, trial, max_leaves):
                table = trial
                break
        else:
            raise CalibrationError("no Clifford correction repairs the slot", details={"slot": slot})
    remaining = verify_byproducts(table, max_leaves, pipeline_check)
    if remaining:
        raise CalibrationError(
            "ideal pipeline branches miss the canonical state",
            details={"failures": remaining},
        )
    logger.info("Byproduct table verified", extra={"table": table.describe()})
    return table

