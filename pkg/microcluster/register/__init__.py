"""Labeled-qubit states, local operators and density operators."""
from microcluster.register.density import (
    Backend,
    BranchEnsemble,
    DenseOperator,
    DensityOperator,
    Representation,
    density_from_pure,
    fidelity,
    mix,
)
from microcluster.register.operators import H, I, LocalOperator, S, S_DAG, X, Y, Z, pbs_weight
from microcluster.register.qubits import QubitFactory, QubitId, QubitRole, default_factory
from microcluster.register.state import PureState

__all__ = [
    "Backend",
    "BranchEnsemble",
    "DenseOperator",
    "DensityOperator",
    "H",
    "I",
    "LocalOperator",
    "PureState",
    "QubitFactory",
    "QubitId",
    "QubitRole",
    "Representation",
    "S",
    "S_DAG",
    "X",
    "Y",
    "Z",
    "default_factory",
    "density_from_pure",
    "fidelity",
    "mix",
    "pbs_weight",
]
