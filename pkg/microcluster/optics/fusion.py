"""Type-1 fusion with an imperfect polarizing beam splitter.

The beam splitter imperfection weights the fused pair's amplitudes by
``diag(1 - alpha, alpha, alpha, 1 - alpha)``. A success detects exactly
one photon after a 45 degree rotation; which input photon reached the
detector is unknown, so both choices enter with weight 1/2. A failure
loses both photons, acting as a computational-basis measurement weighted
by the complement ``1 - W^2``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterator, Sequence

import numpy as np

from microcluster.algebra.scalars import ratio
from microcluster.exceptions import DomainError
from microcluster.logging_config import get_logger
from microcluster.optics.measurement import (
    DEFAULT_BYPRODUCTS,
    FUSION_KETS,
    ByproductTable,
    project_z_outcome,
)
from microcluster.optics.noise import (
    DEFAULT_POLICY,
    ErrorPlacement,
    ErrorPlacementPolicy,
    NoiseModel,
    pauli_channel,
)
from microcluster.register.density import Backend, DensityOperator, mix
from microcluster.register.operators import I, pbs_weight
from microcluster.register.qubits import QubitFactory, QubitId, QubitRole, default_factory
from microcluster.register.state import PureState, locate

logger = get_logger(__name__)

_QUARTER = Fraction(1, 4)


def epr(
    factory: QubitFactory = default_factory,
    *,
    qubits: tuple[QubitId, QubitId] | None = None,
    backend: Backend = Backend.EXACT,
) -> PureState:
    """The two-qubit graph state with unnormalized amplitudes (1, 1, 1, -1)."""
    if qubits is None:
        qubits = (factory.fresh(QubitRole.EPR_HALF), factory.fresh(QubitRole.EPR_HALF))
    return PureState.from_amplitudes(qubits, [1, 1, 1, -1], Backend(backend).dtype)


def failure_weights(alpha: Any) -> dict[tuple[int, int], Any]:
    """Outcome weights ``1 - W(b1 b2)^2`` of a failed fusion."""
    same = 1 - (1 - alpha) ** 2
    differ = 1 - alpha**2
    return {(0, 0): same, (0, 1): differ, (1, 0): differ, (1, 1): same}


def kraus_completeness(alpha: Any) -> bool:
    """``W^dagger W + diag(w) == 1`` entrywise."""
    weight = pbs_weight(alpha).matrix
    gram = np.dot(weight.T, weight)
    fail = failure_weights(alpha)
    for i, outcome in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        for j in range(4):
            expected = 1 if i == j else 0
            value = gram[i, j] + (fail[outcome] if i == j else 0)
            if not value == expected:
                return False
    return True


def success_branches(
    rho: DensityOperator,
    qa: QubitId,
    qb: QubitId,
    alpha: Any,
    survivor: QubitId,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> Iterator[tuple[tuple[str, int], DensityOperator]]:
    """The four unweighted success branches keyed by (measured photon, outcome).

    Outcome -1 is corrected on the survivor, which is relabeled to
    ``survivor`` in every branch.
    """
    weighted = rho.apply_local((qa, qb), pbs_weight(alpha))
    for measured, kept in ((qa, qb), (qb, qa)):
        for sign in (1, -1):
            branch = weighted.project_remove(measured, FUSION_KETS[sign])
            if sign < 0 and not byproducts.fusion_minus == I:
                branch = branch.apply_local(kept, byproducts.fusion_minus)
            yield (measured.label, sign), branch.relabel({kept.label: survivor})


def fuse_success(
    rho: DensityOperator,
    qa: QubitId,
    qb: QubitId,
    noise: NoiseModel,
    policy: ErrorPlacementPolicy = DEFAULT_POLICY,
    roots: Sequence[QubitId] = (),
    *,
    survivor: QubitId | None = None,
    survivor_role: QubitRole = QubitRole.ROOT,
    factory: QubitFactory = default_factory,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> tuple[DensityOperator, QubitId]:
    """Success branch of a Type-1 fusion of ``qa`` and ``qb``.

    The unnormalized output trace equals ``Tr(W rho W^dagger)``. Pauli
    channels are placed according to ``policy``.
    """
    if qa.label == qb.label:
        raise DomainError("cannot fuse a qubit with itself", details={"qubit": qa.label})
    locate(rho.qubits, qa)
    locate(rho.qubits, qb)
    if survivor is None:
        survivor = factory.fresh(survivor_role)
    if policy.placement is ErrorPlacement.BOTH_FUSION_PHOTONS:
        rho = pauli_channel(pauli_channel(rho, qa, noise), qb, noise)
    branches = [branch for _, branch in success_branches(rho, qa, qb, noise.alpha, survivor, byproducts)]
    out = mix(branches).scaled(_QUARTER)
    out = _place_success_noise(out, survivor, noise, policy, roots)
    logger.debug(
        "Fusion succeeded",
        extra={"fused": [qa.label, qb.label], "survivor": survivor.label, "policy": policy.name},
    )
    return out, survivor


def _place_success_noise(
    rho: DensityOperator,
    survivor: QubitId,
    noise: NoiseModel,
    policy: ErrorPlacementPolicy,
    roots: Sequence[QubitId],
) -> DensityOperator:
    placement = policy.placement
    if placement is ErrorPlacement.BOTH_FUSION_PHOTONS:
        return rho
    rho = pauli_channel(rho, survivor, noise)
    if placement is ErrorPlacement.SURVIVOR_PLUS_ROOTS:
        for root in roots:
            if root.label != survivor.label:
                rho = pauli_channel(rho, root, noise)
    elif placement is ErrorPlacement.ALL_CLUSTER_PHOTONS:
        for q in rho.qubits:
            if q.label != survivor.label:
                rho = pauli_channel(rho, q, noise)
    return rho


def fuse_fail(
    rho: DensityOperator,
    qa: QubitId,
    qb: QubitId,
    root_a: QubitId | None,
    root_b: QubitId | None,
    noise: NoiseModel,
    policy: ErrorPlacementPolicy = DEFAULT_POLICY,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> DensityOperator:
    """Failure branch: both photons lost, measured in the computational basis."""
    locate(rho.qubits, qa)
    locate(rho.qubits, qb)
    if policy.noisy_failures:
        rho = pauli_channel(pauli_channel(rho, qa, noise), qb, noise)
    weights = failure_weights(noise.alpha)
    parts = []
    for (b1, b2), weight in weights.items():
        if weight == 0:
            continue
        branch = project_z_outcome(rho, qa, b1, root_a, byproducts)
        branch = project_z_outcome(branch, qb, b2, root_b, byproducts)
        parts.append(branch.scaled(weight))
    if not parts:
        return rho.project_remove(qa, (1, 0)).project_remove(qb, (1, 0)).scaled(0)
    logger.debug("Fusion failed", extra={"fused": [qa.label, qb.label], "policy": policy.name})
    return mix(parts)


def success_probability(rho: DensityOperator, qa: QubitId, qb: QubitId, alpha: Any) -> Any:
    """``Tr(W rho W^dagger) / Tr(rho)``."""
    weighted = rho.apply_local((qa, qb), pbs_weight(alpha))
    return ratio(weighted.trace(), rho.trace(), context="success probability")


def star_state(root: QubitId, leaves: Sequence[QubitId], backend: Backend = Backend.EXACT) -> PureState:
    """``|0,+...+> + |1,-...->`` on ``root`` and ``leaves`` (unnormalized)."""
    dtype = Backend(backend).dtype
    zero = np.array([1, 0], dtype=object)
    one = np.array([0, 1], dtype=object)
    plus = np.array([1, 1], dtype=object)
    minus = np.array([1, -1], dtype=object)
    branch0, branch1 = zero, one
    for _ in leaves:
        branch0 = np.multiply.outer(branch0, plus)
        branch1 = np.multiply.outer(branch1, minus)
    values = list((branch0 + branch1).reshape(-1))
    return PureState.from_amplitudes((root, *leaves), values, dtype)
