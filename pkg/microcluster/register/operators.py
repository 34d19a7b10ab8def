"""Local operators and the tensor kernels that apply them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from microcluster.algebra.gaussian import GaussianRational

_conj = np.frompyfunc(lambda z: z.conjugate(), 1, 1)


def conj_array(array: np.ndarray) -> np.ndarray:
    if array.dtype == object:
        return _conj(array) if array.size else array.copy()
    return np.conj(array)


def to_dtype(array: np.ndarray, dtype: Any) -> np.ndarray:
    if dtype == object:
        return array if array.dtype == object else array.astype(object)
    if array.dtype == object:
        return np.array([complex(x) for x in array.flat], dtype=dtype).reshape(array.shape)
    return array.astype(dtype)


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """A 2^k x 2^k matrix acting on k qubits.

    Entries are kept in whatever scalar type built them; :meth:`array`
    converts to the dtype of the state it is applied to.
    """

    name: str
    matrix: np.ndarray

    @classmethod
    def from_rows(cls, name: str, rows: Sequence[Sequence[Any]]) -> LocalOperator:
        matrix = np.empty((len(rows), len(rows)), dtype=object)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                matrix[i, j] = value
        return cls(name, matrix)

    @classmethod
    def diagonal(cls, name: str, entries: Sequence[Any]) -> LocalOperator:
        n = len(entries)
        return cls.from_rows(name, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def arity(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    def array(self, dtype: Any) -> np.ndarray:
        return to_dtype(self.matrix, dtype)

    def dagger(self) -> LocalOperator:
        return LocalOperator(f"{self.name}†", conj_array(self.matrix).T.copy())

    def __matmul__(self, other: LocalOperator) -> LocalOperator:
        return LocalOperator(f"{self.name}{other.name}", np.dot(self.matrix, other.matrix))

    def scaled(self, factor: Any) -> LocalOperator:
        return LocalOperator(f"{factor}{self.name}", self.matrix * factor)

    def is_diagonal(self) -> bool:
        n = self.matrix.shape[0]
        return all(self.matrix[i, j] == 0 for i in range(n) for j in range(n) if i != j)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LocalOperator):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(
            np.all(self.matrix == other.matrix)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LocalOperator({self.name})"


_i = GaussianRational(0, 1)

I = LocalOperator.from_rows("I", [[1, 0], [0, 1]])
X = LocalOperator.from_rows("X", [[0, 1], [1, 0]])
Y = LocalOperator.from_rows("Y", [[0, -_i], [_i, 0]])
Z = LocalOperator.from_rows("Z", [[1, 0], [0, -1]])
S = LocalOperator.from_rows("S", [[1, 0], [0, _i]])
S_DAG = LocalOperator.from_rows("S†", [[1, 0], [0, -_i]])
# Hadamard without its 1/sqrt(2); states are unnormalized so the scale drops out
H = LocalOperator.from_rows("H", [[1, 1], [1, -1]])

PAULIS = {"I": I, "X": X, "Y": Y, "Z": Z}


def pbs_weight(alpha: Any) -> LocalOperator:
    """Amplitude weighting of the imperfect polarizing beam splitter."""
    keep = 1 - alpha
    return LocalOperator.diagonal("W", [keep, alpha, alpha, keep])


# --- kernels ----------------------------------------------------------------


def _factor_vector(values: Sequence[Any], dtype: Any) -> np.ndarray:
    out = np.empty(len(values), dtype=dtype)
    for i, v in enumerate(values):
        out[i] = v if dtype == object else complex(v)
    return out


def _scale_axes(tensor: np.ndarray, diag: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    if all(d == 1 for d in diag.flat):
        return tensor
    factors = diag.reshape((2,) * k)
    order = sorted(range(k), key=lambda i: axes[i])
    factors = factors.transpose(order)
    shape = [1] * tensor.ndim
    for ax in axes:
        shape[ax] = 2
    return tensor * factors.reshape(shape)


def apply_matrix(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply ``matrix`` to the indicated axes of a (2,)*n tensor."""
    k = len(axes)
    dim = 1 << k
    entries = matrix
    off_diag_zero = all(entries[i, j] == 0 for i in range(dim) for j in range(dim) if i != j)
    if off_diag_zero:
        diag = _factor_vector([entries[i, i] for i in range(dim)], tensor.dtype)
        return _scale_axes(tensor, diag, axes)
    if k == 1 and entries[0, 0] == 0 and entries[1, 1] == 0:
        axis = axes[0]
        flipped = np.flip(tensor, axis)
        diag = _factor_vector([entries[0, 1], entries[1, 0]], tensor.dtype)
        return _scale_axes(flipped, diag, axes)
    m = to_dtype(matrix, tensor.dtype).reshape((2,) * (2 * k))
    out = np.tensordot(m, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def contract_axis(tensor: np.ndarray, coeffs: Sequence[Any], axis: int) -> np.ndarray:
    """``sum_a coeffs[a] * tensor[..., a, ...]`` with the axis removed."""
    result = None
    for a, c in enumerate(coeffs):
        if c == 0:
            continue
        part = np.take(tensor, a, axis=axis)
        if not c == 1:
            if tensor.dtype != object:
                c = complex(c)
            part = part * c
        result = part if result is None else result + part
    if result is None:
        shape = tensor.shape[:axis] + tensor.shape[axis + 1:]
        result = np.zeros(shape, dtype=tensor.dtype)
    return np.asarray(result, dtype=tensor.dtype)
