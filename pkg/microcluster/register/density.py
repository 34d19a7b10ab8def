"""Unnormalized density operators in two interchangeable representations.

:class:`DenseOperator` stores the matrix as a (2,)*2n tensor (row axes
first). :class:`BranchEnsemble` stores ``sum_k w_k |psi_k><psi_k|`` and
merges branches that are equal up to a unit phase. Both expose the same
observable behaviour: trace, overlap and channel application.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from microcluster.algebra.scalars import is_zero, phase_unit, ratio
from microcluster.config import settings
from microcluster.exceptions import CapacityError, DomainError, ZeroDenominatorError
from microcluster.logging_config import get_logger
from microcluster.register.operators import (
    LocalOperator,
    apply_matrix,
    conj_array,
    contract_axis,
    to_dtype,
)
from microcluster.register.qubits import QubitId
from microcluster.register.state import (
    EXACT,
    FLOAT,
    PureState,
    as_targets,
    check_disjoint,
    locate,
    permutation_to,
)

logger = get_logger(__name__)


class Backend(str, Enum):
    EXACT = "exact"
    FLOAT = "float"

    @property
    def dtype(self) -> Any:
        return EXACT if self is Backend.EXACT else FLOAT


class Representation(str, Enum):
    DENSE = "dense"
    BRANCHES = "branches"


def check_capacity(num_qubits: int, exact: bool) -> None:
    limit = settings.exact_max_qubits if exact else settings.float_max_qubits
    if num_qubits > limit:
        backend = "exact" if exact else "float"
        hint = (
            "use the float backend or the truncated-series expansion"
            if exact
            else "reduce the number of leaves"
        )
        raise CapacityError(
            f"{num_qubits} qubits exceed the {backend} backend ceiling of {limit}; {hint}",
            details={"qubits": num_qubits, "limit": limit, "backend": backend},
        )


class DensityOperator(ABC):
    qubits: tuple[QubitId, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(q.label for q in self.qubits)

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    @abstractmethod
    def is_exact(self) -> bool: ...

    @abstractmethod
    def tensor(self, other: DensityOperator) -> DensityOperator: ...

    @abstractmethod
    def apply_local(self, q: QubitId | Sequence[QubitId], op: LocalOperator) -> DensityOperator:
        """Conjugation ``op rho op^dagger`` on the given qubit(s)."""

    @abstractmethod
    def project_remove(self, q: QubitId, ket: Sequence[Any]) -> DensityOperator:
        """``<c| rho |c>`` on ``q`` where ``<c|`` is conjugate to ``ket``."""

    @abstractmethod
    def scaled(self, factor: Any) -> DensityOperator: ...

    @abstractmethod
    def add(self, other: DensityOperator) -> DensityOperator: ...

    @abstractmethod
    def trace(self) -> Any: ...

    @abstractmethod
    def overlap(self, target: PureState) -> Any:
        """<t| rho |t> with ``target`` reordered to this operator's qubits."""

    @abstractmethod
    def relabel(self, mapping: Mapping[str, QubitId]) -> DensityOperator: ...

    @abstractmethod
    def to_dense(self) -> DenseOperator: ...

    def channel(self, q: QubitId | Sequence[QubitId], terms: Iterable[tuple[Any, LocalOperator]]) -> DensityOperator:
        """``sum_k w_k K_k rho K_k^dagger`` on ``q``."""
        parts = [self.apply_local(q, op).scaled(w) for w, op in terms if not is_zero(w)]
        if not parts:
            return self.scaled(0)
        return mix(parts)

    def __add__(self, other: DensityOperator) -> DensityOperator:
        return self.add(other)


# ---------------------------------------------------------------------------
# Dense matrix representation
# ---------------------------------------------------------------------------


class DenseOperator(DensityOperator):
    __slots__ = ("qubits", "data")

    def __init__(self, qubits: Sequence[QubitId], data: np.ndarray) -> None:
        qubits = tuple(qubits)
        check_capacity(len(qubits), data.dtype == object)
        self.qubits = qubits
        self.data = np.asarray(data).reshape((2,) * (2 * len(qubits)))

    @classmethod
    def from_pure(cls, state: PureState, weight: Any = 1) -> DenseOperator:
        data = np.multiply.outer(state.amplitudes, conj_array(state.amplitudes))
        return cls(state.qubits, np.asarray(data, dtype=state.dtype)).scaled(weight)

    @classmethod
    def zero(cls, qubits: Sequence[QubitId], dtype: Any = EXACT) -> DenseOperator:
        n = len(qubits)
        return cls(qubits, np.zeros((2,) * (2 * n), dtype=dtype))

    @property
    def is_exact(self) -> bool:
        return self.data.dtype == object

    def matrix(self) -> np.ndarray:
        dim = 1 << self.num_qubits
        return self.data.reshape(dim, dim)

    def tensor(self, other: DensityOperator) -> DenseOperator:
        other = other.to_dense()
        check_disjoint(self.qubits, other.qubits)
        na, nb = self.num_qubits, other.num_qubits
        check_capacity(na + nb, self.is_exact)
        outer = np.multiply.outer(self.data, other.data)
        perm = (
            list(range(na))
            + list(range(2 * na, 2 * na + nb))
            + list(range(na, 2 * na))
            + list(range(2 * na + nb, 2 * na + 2 * nb))
        )
        return DenseOperator(self.qubits + other.qubits, outer.transpose(perm))

    def apply_local(self, q: QubitId | Sequence[QubitId], op: LocalOperator) -> DenseOperator:
        targets = as_targets(q)
        rows = [locate(self.qubits, t) for t in targets]
        cols = [self.num_qubits + r for r in rows]
        data = apply_matrix(self.data, op.matrix, rows)
        data = apply_matrix(data, conj_array(op.matrix), cols)
        return DenseOperator(self.qubits, data)

    def project_remove(self, q: QubitId, ket: Sequence[Any]) -> DenseOperator:
        i = locate(self.qubits, q)
        n = self.num_qubits
        data = contract_axis(self.data, [c.conjugate() for c in ket], i)
        data = contract_axis(data, list(ket), n - 1 + i)
        return DenseOperator(self.qubits[:i] + self.qubits[i + 1:], data)

    def scaled(self, factor: Any) -> DenseOperator:
        if factor == 1:
            return self
        if not self.is_exact:
            factor = complex(factor)
        return DenseOperator(self.qubits, self.data * factor)

    def reorder(self, labels: Sequence[str]) -> DenseOperator:
        perm = permutation_to(self.qubits, labels)
        n = self.num_qubits
        axes = perm + [n + p for p in perm]
        return DenseOperator([self.qubits[i] for i in perm], self.data.transpose(axes))

    def add(self, other: DensityOperator) -> DenseOperator:
        other = other.to_dense().reorder(self.labels)
        if self.is_exact != other.is_exact:
            raise DomainError("cannot mix exact and float operators")
        return DenseOperator(self.qubits, self.data + other.data)

    def trace(self) -> Any:
        return self.matrix().diagonal().sum()

    def overlap(self, target: PureState) -> Any:
        vec = to_dtype(target.aligned_to(self.qubits).flat(), self.data.dtype)
        return np.dot(conj_array(vec), np.dot(self.matrix(), vec))

    def relabel(self, mapping: Mapping[str, QubitId]) -> DenseOperator:
        return DenseOperator([mapping.get(q.label, q) for q in self.qubits], self.data)

    def to_dense(self) -> DenseOperator:
        return self

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        m = self.matrix()
        adjoint = conj_array(m).T
        if self.is_exact:
            return bool(np.all(m == adjoint))
        return bool(np.allclose(m, adjoint, atol=tol))

    def eigenvalues(self) -> np.ndarray:
        """Real spectrum; float backend only."""
        if self.is_exact:
            raise DomainError("eigenvalues need a float operator")
        return np.linalg.eigvalsh(self.matrix())

    def __repr__(self) -> str:
        return f"DenseOperator({', '.join(self.labels)})"


# ---------------------------------------------------------------------------
# Weighted branch representation
# ---------------------------------------------------------------------------


def _branch_key(state: PureState) -> tuple[Any, tuple[Any, ...]]:
    flat = state.flat()
    lead = next(a for a in flat if not a == 0)
    unit = phase_unit(lead)
    if unit == 1:
        return unit, tuple(flat)
    return unit, tuple(unit * a for a in flat)


class BranchEnsemble(DensityOperator):
    """``sum_k w_k |psi_k><psi_k|`` with real (possibly symbolic) weights."""

    __slots__ = ("qubits", "branches", "_exact")

    def __init__(
        self,
        branches: Iterable[tuple[Any, PureState]],
        qubits: Sequence[QubitId] | None = None,
        *,
        exact: bool | None = None,
    ) -> None:
        branches = [(w, s) for w, s in branches if not is_zero(w) and not s.is_zero()]
        if qubits is None:
            if not branches:
                raise DomainError("an empty ensemble needs an explicit qubit list")
            qubits = branches[0][1].qubits
        qubits = tuple(qubits)
        labels = [q.label for q in qubits]
        branches = [(w, s if s.labels == tuple(labels) else s.reorder(labels)) for w, s in branches]
        if exact is None:
            exact = branches[0][1].is_exact if branches else True
        check_capacity(len(qubits), exact)
        self.qubits = qubits
        self._exact = exact
        self.branches: tuple[tuple[Any, PureState], ...] = tuple(
            self._merge(branches) if exact else branches
        )

    @staticmethod
    def _merge(branches: list[tuple[Any, PureState]]) -> list[tuple[Any, PureState]]:
        merged: dict[tuple[Any, ...], list[Any]] = {}
        for weight, state in branches:
            unit, key = _branch_key(state)
            slot = merged.get(key)
            if slot is None:
                merged[key] = [weight, state if unit == 1 else state.scaled(unit)]
            else:
                slot[0] = slot[0] + weight
        return [(w, s) for w, s in merged.values() if not is_zero(w)]

    @classmethod
    def from_pure(cls, state: PureState, weight: Any = 1) -> BranchEnsemble:
        return cls([(weight, state)], state.qubits, exact=state.is_exact)

    def _with(self, branches: Iterable[tuple[Any, PureState]], qubits: Sequence[QubitId] | None = None) -> BranchEnsemble:
        return BranchEnsemble(branches, self.qubits if qubits is None else qubits, exact=self._exact)

    @property
    def is_exact(self) -> bool:
        return self._exact

    @property
    def num_branches(self) -> int:
        return len(self.branches)

    def tensor(self, other: DensityOperator) -> DensityOperator:
        if not isinstance(other, BranchEnsemble):
            return self.to_dense().tensor(other)
        check_disjoint(self.qubits, other.qubits)
        product = [
            (wa * wb, sa.tensor(sb)) for wa, sa in self.branches for wb, sb in other.branches
        ]
        return self._with(product, self.qubits + other.qubits)

    def apply_local(self, q: QubitId | Sequence[QubitId], op: LocalOperator) -> BranchEnsemble:
        for t in as_targets(q):
            locate(self.qubits, t)
        return self._with((w, s.apply_local(q, op)) for w, s in self.branches)

    def project_remove(self, q: QubitId, ket: Sequence[Any]) -> BranchEnsemble:
        i = locate(self.qubits, q)
        remaining = self.qubits[:i] + self.qubits[i + 1:]
        return self._with(((w, s.project_remove(q, ket)) for w, s in self.branches), remaining)

    def scaled(self, factor: Any) -> BranchEnsemble:
        if factor == 1:
            return self
        return self._with((w * factor, s) for w, s in self.branches)

    def add(self, other: DensityOperator) -> DensityOperator:
        if not isinstance(other, BranchEnsemble):
            return self.to_dense().add(other)
        permutation_to(other.qubits, self.labels)
        return self._with(list(self.branches) + list(other.branches))

    def trace(self) -> Any:
        total: Any = 0
        for w, s in self.branches:
            total = total + w * s.norm2()
        return total if self._exact else complex(total)

    def overlap(self, target: PureState) -> Any:
        total: Any = 0
        for w, s in self.branches:
            amp = target.inner(s)
            total = total + w * amp * amp.conjugate()
        return total if self._exact else complex(total)

    def relabel(self, mapping: Mapping[str, QubitId]) -> BranchEnsemble:
        qubits = [mapping.get(q.label, q) for q in self.qubits]
        return self._with(((w, s.relabel(mapping)) for w, s in self.branches), qubits)

    def to_dense(self) -> DenseOperator:
        dtype = EXACT if self._exact else FLOAT
        out = DenseOperator.zero(self.qubits, dtype)
        for w, s in self.branches:
            out = out.add(DenseOperator.from_pure(s, w))
        return out

    def __repr__(self) -> str:
        return f"BranchEnsemble({', '.join(self.labels)}; {self.num_branches} branches)"


# ---------------------------------------------------------------------------
# Free functions
# ---------------------------------------------------------------------------


def density_from_pure(state: PureState, representation: Representation = Representation.BRANCHES) -> DensityOperator:
    if Representation(representation) is Representation.DENSE:
        return DenseOperator.from_pure(state)
    return BranchEnsemble.from_pure(state)


def mix(operators: Sequence[DensityOperator]) -> DensityOperator:
    """Unnormalized sum of operators on the same qubits."""
    if not operators:
        raise DomainError("mix needs at least one operator")
    first = operators[0]
    if all(isinstance(op, BranchEnsemble) for op in operators):
        branches = [b for op in operators for b in op.branches]
        for op in operators[1:]:
            permutation_to(op.qubits, first.labels)
        return BranchEnsemble(branches, first.qubits, exact=first.is_exact)
    total = first.to_dense()
    for op in operators[1:]:
        total = total.add(op)
    return total


def fidelity(target: PureState, rho: DensityOperator) -> Any:
    """``<t|rho|t> / (<t|t> Tr rho)``; a rational function for symbolic input."""
    permutation_to(target.qubits, rho.labels)
    norm = target.norm2()
    if is_zero(norm):
        raise DomainError("fidelity target is the zero vector")
    tr = rho.trace()
    if is_zero(tr):
        raise ZeroDenominatorError("state has zero trace: no successful branch survived")
    return ratio(rho.overlap(target), norm * tr, context="fidelity")
