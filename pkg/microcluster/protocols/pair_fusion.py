"""Bonding two microclusters, conditioned on which fusion attempt succeeds.

Attempts use the newest remaining leaf of each microcluster first. After
the successful attempt the remaining leaves are measured along z and the
connecting photon along y, leaving the two roots as nearest neighbours.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Any, Iterator, NamedTuple

from microcluster.exceptions import AttemptExceedsLeaves, ParameterError
from microcluster.logging_config import get_logger
from microcluster.optics.calibration import calibrate_byproducts
from microcluster.optics.fusion import (
    failure_weights,
    fuse_fail,
    fuse_success,
    star_state,
    success_branches,
)
from microcluster.optics.measurement import (
    DEFAULT_BYPRODUCTS,
    ByproductTable,
    joined_pair_state,
    measure_y_remove,
    measure_z_remove,
    project_z_outcome,
    y_branches,
    z_branches,
)
from microcluster.optics.noise import (
    DEFAULT_POLICY,
    ErrorPlacement,
    ErrorPlacementPolicy,
    NoiseModel,
    pauli_channel,
)
from microcluster.protocols.microcluster import (
    MicroclusterHandle,
    build_microcluster,
    cached_microcluster,
    construction_branch_failures,
)
from microcluster.register.density import (
    BranchEnsemble,
    DensityOperator,
    Representation,
    fidelity,
    mix,
)
from microcluster.register.qubits import QubitFactory, QubitId, QubitRole
from microcluster.register.state import PureState

logger = get_logger(__name__)


class Strategy(str, Enum):
    SPLIT = "split"
    JOINT = "joint"


@dataclass(frozen=True)
class PairFusionSpec:
    leaves: int
    attempt: int
    noise: NoiseModel = field(default_factory=NoiseModel.ideal)
    policy: ErrorPlacementPolicy = DEFAULT_POLICY
    strategy: Strategy = Strategy.SPLIT
    representation: Representation | None = None
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS

    def validate(self) -> None:
        if not isinstance(self.leaves, int) or self.leaves < 1:
            raise ParameterError("leaves must be at least 1", details={"leaves": self.leaves})
        if not isinstance(self.attempt, int) or self.attempt < 1:
            raise ParameterError("attempt must be at least 1", details={"attempt": self.attempt})
        if self.attempt > self.leaves:
            raise AttemptExceedsLeaves(
                "attempt exceeds leaves",
                details={"leaves": self.leaves, "attempt": self.attempt},
            )
        self.noise.validate_numeric()


class PairFusionResult(NamedTuple):
    state: DensityOperator
    fidelity: Any
    root_a: QubitId
    root_b: QubitId


def pair_target(root_a: QubitId, root_b: QubitId, exact: bool = True) -> PureState:
    """The canonical two-root state ``|++> - i|-->``."""
    return joined_pair_state(root_a, root_b, object if exact else complex)


def _handles(spec: PairFusionSpec, factory: QubitFactory) -> tuple[MicroclusterHandle, MicroclusterHandle]:
    if spec.byproducts == DEFAULT_BYPRODUCTS:
        base = cached_microcluster(spec.leaves, spec.noise, spec.policy, spec.representation)
    else:
        base = build_microcluster(
            spec.leaves,
            spec.noise,
            spec.policy,
            representation=spec.representation,
            factory=factory,
            byproducts=spec.byproducts,
        )
    return base.relabeled(factory), base.relabeled(factory)


def _fuse_joint(spec: PairFusionSpec, factory: QubitFactory) -> tuple[DensityOperator, QubitId, QubitId]:
    a, b = _handles(spec, factory)
    noise, policy = spec.noise, spec.policy
    rho = a.state.tensor(b.state)
    leaves_a, leaves_b = list(a.leaves), list(b.leaves)
    for _ in range(spec.attempt - 1):
        rho = fuse_fail(
            rho, leaves_a.pop(), leaves_b.pop(), a.root, b.root, noise, policy, spec.byproducts
        )
    rho, connector = fuse_success(
        rho,
        leaves_a.pop(),
        leaves_b.pop(),
        noise,
        policy,
        roots=(a.root, b.root),
        survivor_role=QubitRole.CONNECTOR,
        factory=factory,
        byproducts=spec.byproducts,
    )
    for leaf in leaves_a:
        rho = measure_z_remove(rho, leaf, a.root, spec.byproducts)
    for leaf in leaves_b:
        rho = measure_z_remove(rho, leaf, b.root, spec.byproducts)
    rho = measure_y_remove(rho, connector, a.root, b.root, spec.byproducts)
    return rho, a.root, b.root


def _side_terms(handle: MicroclusterHandle, spec: PairFusionSpec) -> tuple[QubitId, list[tuple[tuple[int, ...], DensityOperator]]]:
    """One microcluster reduced to (root, bonding leaf), one term per failure record."""
    noise, policy = spec.noise, spec.policy
    n, k = spec.leaves, spec.attempt
    rho = handle.state
    extraneous = handle.leaves[: n - k]
    failing = [handle.leaves[n - j] for j in range(1, k)]
    bonding = handle.leaves[n - k]
    if policy.placement is ErrorPlacement.ALL_CLUSTER_PHOTONS:
        for leaf in extraneous:
            rho = pauli_channel(rho, leaf, noise)
    for leaf in extraneous:
        rho = measure_z_remove(rho, leaf, handle.root, spec.byproducts)
    if policy.noisy_failures:
        for leaf in failing:
            rho = pauli_channel(rho, leaf, noise)
    terms = []
    for bits in itertools.product((0, 1), repeat=len(failing)):
        term = rho
        for leaf, bit in zip(failing, bits):
            term = project_z_outcome(term, leaf, bit, handle.root, spec.byproducts)
        if not term.trace() == 0:
            terms.append((bits, term))
    return bonding, terms


def _fuse_split(spec: PairFusionSpec, factory: QubitFactory) -> tuple[DensityOperator, QubitId, QubitId]:
    a, b = _handles(spec, factory)
    noise, policy = spec.noise, spec.policy
    bond_a, terms_a = _side_terms(a, spec)
    bond_b, terms_b = _side_terms(b, spec)
    weights = failure_weights(noise.alpha)
    parts = []
    for bits_a, rho_a in terms_a:
        for bits_b, rho_b in terms_b:
            weight: Any = 1
            for b1, b2 in zip(bits_a, bits_b):
                weight = weight * weights[(b1, b2)]
            if weight == 0:
                continue
            parts.append(rho_a.tensor(rho_b).scaled(weight))
    rho = mix(parts)
    rho, connector = fuse_success(
        rho,
        bond_a,
        bond_b,
        noise,
        policy,
        roots=(a.root, b.root),
        survivor_role=QubitRole.CONNECTOR,
        factory=factory,
        byproducts=spec.byproducts,
    )
    rho = measure_y_remove(rho, connector, a.root, b.root, spec.byproducts)
    return rho, a.root, b.root


def fuse_pair(spec: PairFusionSpec, factory: QubitFactory | None = None) -> PairFusionResult:
    """Bond two ``spec.leaves``-leaf microclusters at attempt ``spec.attempt``.

    Returns the two-root state and its fidelity against :func:`pair_target`.
    """
    spec.validate()
    factory = factory or QubitFactory("pf-")
    started = time.perf_counter()
    if Strategy(spec.strategy) is Strategy.JOINT:
        rho, root_a, root_b = _fuse_joint(spec, factory)
    else:
        rho, root_a, root_b = _fuse_split(spec, factory)
    value = fidelity(pair_target(root_a, root_b, rho.is_exact), rho)
    logger.debug(
        "Pair fused",
        extra={
            "leaves": spec.leaves,
            "attempt": spec.attempt,
            "policy": spec.policy.name,
            "strategy": Strategy(spec.strategy).value,
            "duration_ms": round((time.perf_counter() - started) * 1000, 2),
        },
    )
    return PairFusionResult(rho, value, root_a, root_b)


def pair_fidelity(
    leaves: int,
    attempt: int,
    noise: NoiseModel | None = None,
    policy: ErrorPlacementPolicy | str = DEFAULT_POLICY,
    strategy: Strategy = Strategy.SPLIT,
) -> Any:
    spec = PairFusionSpec(
        leaves,
        attempt,
        noise or NoiseModel.ideal(),
        ErrorPlacementPolicy.parse(policy),
        Strategy(strategy),
    )
    return fuse_pair(spec).fidelity


# ---------------------------------------------------------------------------
# Ideal branch enumeration for calibration
# ---------------------------------------------------------------------------


def _walk(rho: DensityOperator, steps: list, path: tuple[str, ...]) -> Iterator[tuple[tuple[str, ...], DensityOperator]]:
    if not steps:
        yield path, rho
        return
    step, rest = steps[0], steps[1:]
    for tag, branch in step(rho):
        if branch.trace() == 0:
            continue
        yield from _walk(branch, rest, (*path, tag))


def pair_branch_failures(byproducts: ByproductTable, max_leaves: int = 4) -> list[str]:
    """Ideal pair-fusion branches that miss the canonical pair state."""
    failures: list[str] = []
    ideal_fail = failure_weights(0)
    for n in range(1, max_leaves + 1):
        for k in range(1, n + 1):
            factory = QubitFactory(f"cal-pf{n}{k}-")
            ra, rb = factory.fresh(QubitRole.ROOT), factory.fresh(QubitRole.ROOT)
            la = [factory.fresh(QubitRole.LEAF, i) for i in range(n)]
            lb = [factory.fresh(QubitRole.LEAF, i) for i in range(n)]
            connector = factory.fresh(QubitRole.CONNECTOR)
            rho = BranchEnsemble.from_pure(star_state(ra, la)).tensor(
                BranchEnsemble.from_pure(star_state(rb, lb))
            )

            def fail_step(qa: QubitId, qb: QubitId, rho: DensityOperator) -> Iterator[tuple[str, DensityOperator]]:
                for (b1, b2), w in ideal_fail.items():
                    if w == 0:
                        continue
                    out = project_z_outcome(rho, qa, b1, ra, byproducts)
                    yield f"fail{b1}{b2}", project_z_outcome(out, qb, b2, rb, byproducts)

            def success_step(qa: QubitId, qb: QubitId, rho: DensityOperator) -> Iterator[tuple[str, DensityOperator]]:
                for (measured, sign), branch in success_branches(rho, qa, qb, 0, connector, byproducts):
                    yield f"fuse[{measured}]{sign:+d}", branch

            def z_step(leaf: QubitId, root: QubitId, rho: DensityOperator) -> Iterator[tuple[str, DensityOperator]]:
                for bit, branch in z_branches(rho, leaf, root, byproducts):
                    yield f"z{bit}", branch

            def y_step(rho: DensityOperator) -> Iterator[tuple[str, DensityOperator]]:
                for sign, branch in y_branches(rho, connector, ra, rb, byproducts):
                    yield f"y{sign:+d}", branch

            steps = [partial(fail_step, la[n - j], lb[n - j]) for j in range(1, k)]
            steps.append(partial(success_step, la[n - k], lb[n - k]))
            steps += [partial(z_step, leaf, ra) for leaf in la[: n - k]]
            steps += [partial(z_step, leaf, rb) for leaf in lb[: n - k]]
            steps.append(y_step)
            target = pair_target(ra, rb)
            for path, branch in _walk(rho, steps, ()):
                if not fidelity(target, branch) == 1:
                    failures.append(f"pair n={n} k={k} branch={'/'.join(path)}")
    return failures


def pipeline_failures(byproducts: ByproductTable, max_leaves: int = 4) -> list[str]:
    return construction_branch_failures(byproducts, max_leaves) + pair_branch_failures(byproducts, max_leaves)


def calibrate_pipelines(max_leaves: int = 4, table: ByproductTable = DEFAULT_BYPRODUCTS) -> ByproductTable:
    """Byproduct calibration including every branch of the full pipelines."""
    return calibrate_byproducts(table, max_leaves, partial(pipeline_failures, max_leaves=max_leaves))

