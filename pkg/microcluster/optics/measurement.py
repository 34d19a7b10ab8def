"""Destructive z- and y-axis measurements with byproduct corrections."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Iterator

from microcluster.algebra.gaussian import GaussianRational
from microcluster.register.density import DensityOperator, mix
from microcluster.register.operators import I, LocalOperator, Z
from microcluster.register.qubits import QubitId
from microcluster.register.state import PureState, locate

_i = GaussianRational(0, 1)

Z_KETS: tuple[tuple[int, int], tuple[int, int]] = ((1, 0), (0, 1))
# +1 and -1 eigenvectors of sigma_y
Y_PLUS_KET = (1, _i)
Y_MINUS_KET = (1, -_i)
FUSION_KETS = {1: (1, 1), -1: (1, -1)}


@dataclass(frozen=True)
class ByproductTable:
    """Outcome-dependent corrections.

    ``fusion_minus`` acts on the fusion survivor, ``leaf_one`` on the root
    of the measured leaf, and ``y_minus`` / ``y_plus`` on (root A, root B).
    """

    fusion_minus: LocalOperator = Z
    leaf_one: LocalOperator = Z
    y_minus: tuple[LocalOperator, LocalOperator] = (Z, Z)
    y_plus: tuple[LocalOperator, LocalOperator] = (I, I)

    def with_slot(self, slot: str, value: Any) -> ByproductTable:
        return replace(self, **{slot: value})

    def describe(self) -> dict[str, str]:
        return {
            "fusion_minus": self.fusion_minus.name,
            "leaf_one": self.leaf_one.name,
            "y_minus": "⊗".join(op.name for op in self.y_minus),
            "y_plus": "⊗".join(op.name for op in self.y_plus),
        }

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ByproductTable):
            return NotImplemented
        return (
            self.fusion_minus == other.fusion_minus
            and self.leaf_one == other.leaf_one
            and all(a == b for a, b in zip(self.y_minus, other.y_minus))
            and all(a == b for a, b in zip(self.y_plus, other.y_plus))
        )

    __hash__ = None  # type: ignore[assignment]


DEFAULT_BYPRODUCTS = ByproductTable()


def _correct(rho: DensityOperator, q: QubitId | None, op: LocalOperator) -> DensityOperator:
    if q is None or op == I:
        return rho
    return rho.apply_local(q, op)


def project_z_outcome(
    rho: DensityOperator,
    q: QubitId,
    bit: int,
    root: QubitId | None,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> DensityOperator:
    """One computational-basis outcome of ``q`` with its root correction."""
    out = rho.project_remove(q, Z_KETS[bit])
    return _correct(out, root, byproducts.leaf_one) if bit else out


def z_branches(
    rho: DensityOperator,
    q: QubitId,
    root: QubitId | None,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> Iterator[tuple[int, DensityOperator]]:
    for bit in (0, 1):
        yield bit, project_z_outcome(rho, q, bit, root, byproducts)


def measure_z_remove(
    rho: DensityOperator,
    q: QubitId,
    root: QubitId | None,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> DensityOperator:
    """Measure ``q`` along z, remove it and correct its root; trace preserving."""
    if root is not None:
        locate(rho.qubits, root)
    return mix([branch for _, branch in z_branches(rho, q, root, byproducts)])


def y_outcome(
    rho: DensityOperator,
    q: QubitId,
    sign: int,
    root_a: QubitId,
    root_b: QubitId,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> DensityOperator:
    """Unweighted y-axis outcome ``sign`` on ``q`` followed by its correction."""
    ket = Y_PLUS_KET if sign > 0 else Y_MINUS_KET
    out = rho.project_remove(q, ket)
    ops = byproducts.y_plus if sign > 0 else byproducts.y_minus
    out = _correct(out, root_a, ops[0])
    return _correct(out, root_b, ops[1])


def y_branches(
    rho: DensityOperator,
    q: QubitId,
    root_a: QubitId,
    root_b: QubitId,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> Iterator[tuple[int, DensityOperator]]:
    for sign in (1, -1):
        yield sign, y_outcome(rho, q, sign, root_a, root_b, byproducts)


def measure_y_remove(
    rho: DensityOperator,
    q: QubitId,
    root_a: QubitId,
    root_b: QubitId,
    byproducts: ByproductTable = DEFAULT_BYPRODUCTS,
) -> DensityOperator:
    """Measure ``q`` along y, joining its neighbours; trace preserving.

    The kets (1, +-i) have squared norm 2, so each outcome carries 1/2.
    """
    locate(rho.qubits, root_a)
    locate(rho.qubits, root_b)
    return mix([branch for _, branch in y_branches(rho, q, root_a, root_b, byproducts)]).scaled(
        Fraction(1, 2)
    )


def joined_pair_state(root_a: QubitId, root_b: QubitId, dtype: Any = object) -> PureState:
    """``|++> - i|-->`` (unnormalized): the y+ output of an ideal 3-chain."""
    values = [1 - _i, 1 + _i, 1 + _i, 1 - _i]
    return PureState.from_amplitudes((root_a, root_b), values, dtype)
