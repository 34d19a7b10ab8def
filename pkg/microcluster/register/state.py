"""Unnormalized pure states on labeled qubits."""
from __future__ import annotations

import itertools
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from microcluster.exceptions import DomainError, QubitCollisionError, UnknownQubitError
from microcluster.register.operators import (
    LocalOperator,
    apply_matrix,
    conj_array,
    contract_axis,
    to_dtype,
)
from microcluster.register.qubits import QubitId

EXACT = object
FLOAT = np.complex128


def _labels(qubits: Iterable[QubitId]) -> tuple[str, ...]:
    return tuple(q.label for q in qubits)


def locate(qubits: Sequence[QubitId], q: QubitId | str) -> int:
    """Position of ``q`` (matched by label) in ``qubits``."""
    label = q if isinstance(q, str) else q.label
    for i, candidate in enumerate(qubits):
        if candidate.label == label:
            return i
    raise UnknownQubitError(f"qubit {label} not in state", details={"qubit": label, "qubits": list(_labels(qubits))})


def check_disjoint(a: Sequence[QubitId], b: Sequence[QubitId]) -> None:
    shared = set(_labels(a)) & set(_labels(b))
    if shared:
        raise QubitCollisionError("qubit labels collide", details={"labels": sorted(shared)})


def as_targets(q: QubitId | Sequence[QubitId]) -> tuple[QubitId, ...]:
    targets = (q,) if isinstance(q, (QubitId, str)) else tuple(q)
    if len(set(t if isinstance(t, str) else t.label for t in targets)) != len(targets):
        raise DomainError("operator targets must be distinct qubits")
    return targets


def permutation_to(source: Sequence[QubitId], labels: Sequence[str]) -> list[int]:
    """Axis permutation taking ``source`` order to ``labels`` order."""
    if sorted(_labels(source)) != sorted(labels):
        raise QubitCollisionError(
            "qubit lists differ",
            details={"left": list(_labels(source)), "right": list(labels)},
        )
    return [locate(source, label) for label in labels]


class PureState:
    """An unnormalized state vector stored as a (2,)*n tensor.

    The dtype is ``object`` for exact scalars and ``complex128`` for the
    float backend. Every operation returns a new state.
    """

    __slots__ = ("qubits", "amplitudes")

    def __init__(self, qubits: Sequence[QubitId], amplitudes: np.ndarray) -> None:
        qubits = tuple(qubits)
        if len(set(_labels(qubits))) != len(qubits):
            raise QubitCollisionError("duplicate qubit labels", details={"qubits": list(_labels(qubits))})
        amplitudes = np.asarray(amplitudes)
        if amplitudes.size != 1 << len(qubits):
            raise DomainError(
                "amplitude vector length must be 2^n",
                details={"qubits": len(qubits), "length": int(amplitudes.size)},
            )
        self.qubits = qubits
        self.amplitudes = amplitudes.reshape((2,) * len(qubits))

    # --- constructors ---------------------------------------------------

    @classmethod
    def from_amplitudes(cls, qubits: Sequence[QubitId], values: Sequence[Any], dtype: Any = EXACT) -> PureState:
        array = np.empty(len(values), dtype=dtype)
        for i, v in enumerate(values):
            array[i] = v if dtype == EXACT else complex(v)
        return cls(qubits, array)

    @classmethod
    def basis(cls, qubits: Sequence[QubitId], bits: str | Sequence[int], dtype: Any = EXACT) -> PureState:
        bits = [int(b) for b in bits]
        if len(bits) != len(qubits):
            raise DomainError("basis label length must match the qubit count")
        values = [0] * (1 << len(qubits))
        values[int("".join(map(str, bits)) or "0", 2)] = 1
        return cls.from_amplitudes(qubits, values, dtype)

    @classmethod
    def scalar(cls, value: Any, dtype: Any = EXACT) -> PureState:
        return cls.from_amplitudes((), [value], dtype)

    # --- properties -----------------------------------------------------

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def labels(self) -> tuple[str, ...]:
        return _labels(self.qubits)

    @property
    def dtype(self) -> Any:
        return self.amplitudes.dtype

    @property
    def is_exact(self) -> bool:
        return self.amplitudes.dtype == object

    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.amplitudes.flat)

    def astype(self, dtype: Any) -> PureState:
        return PureState(self.qubits, to_dtype(self.amplitudes, dtype))

    # --- operations -----------------------------------------------------

    def tensor(self, other: PureState) -> PureState:
        check_disjoint(self.qubits, other.qubits)
        amplitudes = np.multiply.outer(self.amplitudes, other.amplitudes)
        return PureState(self.qubits + other.qubits, amplitudes)

    def apply_local(self, q: QubitId | Sequence[QubitId], op: LocalOperator) -> PureState:
        targets = as_targets(q)
        if op.arity != len(targets):
            raise DomainError("operator arity does not match its targets", details={"operator": op.name})
        axes = [locate(self.qubits, t) for t in targets]
        return PureState(self.qubits, apply_matrix(self.amplitudes, op.matrix, axes))

    def project_remove(self, q: QubitId, ket: Sequence[Any]) -> PureState:
        """Contract ``q`` with the bra conjugate to ``ket`` and drop it."""
        axis = locate(self.qubits, q)
        bra = [c.conjugate() for c in ket]
        out = contract_axis(self.amplitudes, bra, axis)
        return PureState(self.qubits[:axis] + self.qubits[axis + 1:], out)

    def scaled(self, factor: Any) -> PureState:
        if factor == 1:
            return self
        if not self.is_exact:
            factor = complex(factor)
        return PureState(self.qubits, self.amplitudes * factor)

    def relabel(self, mapping: Mapping[str, QubitId]) -> PureState:
        return PureState([mapping.get(q.label, q) for q in self.qubits], self.amplitudes)

    def reorder(self, labels: Sequence[str]) -> PureState:
        perm = permutation_to(self.qubits, labels)
        return PureState([self.qubits[i] for i in perm], self.amplitudes.transpose(perm))

    def aligned_to(self, qubits: Sequence[QubitId]) -> PureState:
        return self.reorder(_labels(qubits))

    def inner(self, other: PureState) -> Any:
        """<self|other>, with ``other`` reordered to this state's qubits."""
        other = other.aligned_to(self.qubits)
        return np.sum(conj_array(self.amplitudes) * other.amplitudes)

    def norm2(self) -> Any:
        return self.inner(self)

    # --- rendering ------------------------------------------------------

    def render(self) -> str:
        lines = []
        n = self.num_qubits
        for bits in itertools.product("01", repeat=n):
            value = self.amplitudes[tuple(int(b) for b in bits)] if n else self.amplitudes[()]
            if value == 0:
                continue
            lines.append(f"|{''.join(bits)}>: {value}")
        header = "qubits: " + " ".join(self.labels)
        return "\n".join([header, *lines]) if lines else header + "\n0"

    def __repr__(self) -> str:
        return f"PureState({', '.join(self.labels)})"
