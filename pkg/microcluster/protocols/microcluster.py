"""Microcluster construction by repeated Type-1 fusion."""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from microcluster.algebra import Polynomial, RationalFunction, Variable
from microcluster.exceptions import ParameterError
from microcluster.logging_config import get_logger
from microcluster.optics.fusion import epr, fuse_success, star_state, success_branches
from microcluster.optics.measurement import DEFAULT_BYPRODUCTS, ByproductTable
from microcluster.optics.noise import DEFAULT_POLICY, ErrorPlacementPolicy, NoiseModel
from microcluster.register.density import (
    BranchEnsemble,
    DensityOperator,
    Representation,
    density_from_pure,
    fidelity,
)
from microcluster.register.qubits import QubitFactory, QubitId, QubitRole, default_factory
from microcluster.register.state import PureState

logger = get_logger(__name__)


@dataclass(frozen=True)
class MicroclusterHandle:
    """A built microcluster; ``leaves`` are ordered oldest first."""

    state: DensityOperator
    root: QubitId
    leaves: tuple[QubitId, ...]
    fusions: int = 0

    @property
    def num_leaves(self) -> int:
        return len(self.leaves)

    @property
    def newest_leaf(self) -> QubitId:
        return self.leaves[-1]

    def relabeled(self, factory: QubitFactory) -> MicroclusterHandle:
        """The same microcluster on fresh labels."""
        mapping = {self.root.label: factory.fresh(QubitRole.ROOT, self.root.birth)}
        for leaf in self.leaves:
            mapping[leaf.label] = factory.fresh(QubitRole.LEAF, leaf.birth)
        return MicroclusterHandle(
            self.state.relabel(mapping),
            mapping[self.root.label],
            tuple(mapping[leaf.label] for leaf in self.leaves),
            self.fusions,
        )


def star_target(handle: MicroclusterHandle) -> PureState:
    """The ideal star ``|0,+^n> + |1,-^n>`` on the handle's qubits."""
    backend = "exact" if handle.state.is_exact else "float"
    return star_state(handle.root, handle.leaves, backend)


def _check_leaves(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ParameterError("a microcluster needs at least one leaf", details={"leaves": n})


def build_microcluster(
    n: int,
    noise: NoiseModel | None = None,
    policy: ErrorPlacementPolicy = DEFAULT_POLICY,
    *,
    representation: Representation | None = None,
    factory: QubitFactory = default_factory,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> MicroclusterHandle:
    """Grow an ``n``-leaf microcluster from EPR pairs.

    n = 1 is a single pair. Otherwise one photon of each of two pairs is
    fused into the root, and each further success fuses the root with one
    photon of a fresh pair whose partner becomes the newest leaf.
    """
    _check_leaves(n)
    noise = noise or NoiseModel.ideal()
    noise.validate_numeric()
    policy = ErrorPlacementPolicy.parse(policy)
    representation = Representation(representation or noise.default_representation)
    backend = noise.backend
    started = time.perf_counter()

    def pair(role: QubitRole, birth: int) -> tuple[QubitId, QubitId, DensityOperator]:
        half = factory.fresh(role)
        leaf = factory.fresh(QubitRole.LEAF, birth)
        state = epr(qubits=(half, leaf), backend=backend)
        return half, leaf, density_from_pure(state, representation)

    if n == 1:
        root, leaf, rho = pair(QubitRole.ROOT, 0)
        return MicroclusterHandle(rho, root, (leaf,), 0)

    x1, l1, rho1 = pair(QubitRole.EPR_HALF, 0)
    x2, l2, rho2 = pair(QubitRole.EPR_HALF, 1)
    rho, root = fuse_success(
        rho1.tensor(rho2), x1, x2, noise, policy, factory=factory, byproducts=byproducts
    )
    leaves = [l1, l2]
    for birth in range(2, n):
        half, leaf, fresh = pair(QubitRole.EPR_HALF, birth)
        rho, root = fuse_success(
            rho.tensor(fresh), root, half, noise, policy, factory=factory, byproducts=byproducts
        )
        leaves.append(leaf)
    logger.debug(
        "Microcluster built",
        extra={
            "leaves": n,
            "noise": noise.kind,
            "policy": policy.name,
            "duration_ms": round((time.perf_counter() - started) * 1000, 2),
        },
    )
    return MicroclusterHandle(rho, root, tuple(leaves), n - 1)


@lru_cache(maxsize=128)
def cached_microcluster(
    n: int,
    noise: NoiseModel,
    policy: ErrorPlacementPolicy = DEFAULT_POLICY,
    representation: Representation | None = None,
) -> MicroclusterHandle:
    """:func:`build_microcluster` memoized on its arguments.

    Callers that combine two handles must relabel one of them first.
    """
    return build_microcluster(n, noise, policy, representation=representation)


def to_q_form(value: Any) -> Any:
    """Rewrite a fidelity in p_x = p_y = p as a function of q = 2p - 1 and p_z."""
    p = Polynomial.variable(Variable.P)
    half_q = (Polynomial.variable(Variable.Q) + 1) / 2
    if isinstance(value, (Polynomial, RationalFunction)):
        value = value.substitute({Variable.P_X: p, Variable.P_Y: p})
        value = value.substitute({Variable.P: half_q})
        if isinstance(value, RationalFunction) and value.is_polynomial():
            return value.as_polynomial()
    return value


def microcluster_fidelity(
    n: int,
    noise: NoiseModel | None = None,
    policy: ErrorPlacementPolicy = DEFAULT_POLICY,
    *,
    substitute_q: bool = False,
    representation: Representation | None = None,
) -> Any:
    """Fidelity of the built microcluster against the ideal star.

    With ``substitute_q`` the result is rewritten in (q, p_z), the form used
    for the Pauli-only table.
    """
    _check_leaves(n)
    noise = noise or NoiseModel.ideal()
    handle = cached_microcluster(n, noise, ErrorPlacementPolicy.parse(policy), representation)
    value = fidelity(star_target(handle), handle.state)
    if substitute_q:
        return to_q_form(value)
    return value


def polynomial_fidelity(value: Any) -> Polynomial:
    """The fidelity as a polynomial when its denominator is constant."""
    if isinstance(value, RationalFunction):
        return value.as_polynomial()
    return Polynomial.coerce(value)


def construction_branch_failures(byproducts: ByproductTable, max_leaves: int = 4) -> list[str]:
    """Ideal construction branches (which photon, outcome) that miss the star."""
    failures: list[str] = []
    for n in range(2, max_leaves + 1):
        factory = QubitFactory(f"cal-mc{n}-")
        leaves = [factory.fresh(QubitRole.LEAF, birth) for birth in range(n)]
        halves = [factory.fresh(QubitRole.EPR_HALF) for _ in range(n)]
        survivors = [factory.fresh(QubitRole.ROOT) for _ in range(n - 1)]
        pairs = [
            BranchEnsemble.from_pure(epr(qubits=(half, leaf))) for half, leaf in zip(halves, leaves)
        ]

        def walk(rho: DensityOperator, root: QubitId, step: int, path: tuple[str, ...]) -> None:
            if step == n:
                if not fidelity(star_state(root, leaves), rho) == 1:
                    failures.append(f"construction n={n} branch={'/'.join(path)}")
                return
            joined = rho.tensor(pairs[step])
            survivor = survivors[step - 1]
            for (measured, sign), branch in success_branches(
                joined, root, halves[step], 0, survivor, byproducts
            ):
                if branch.trace() == 0:
                    continue
                tag = f"{'root' if measured == root.label else 'fresh'}{sign:+d}"
                walk(branch, survivor, step + 1, (*path, tag))

        walk(pairs[0], halves[0], 1, ())
    return failures
