"""Tests for qubit labels, pure states and the two density representations."""
from fractions import Fraction

import numpy as np
import pytest

from microcluster.config import settings
from microcluster.exceptions import (
    CapacityError,
    DomainError,
    QubitCollisionError,
    UnknownQubitError,
    ZeroDenominatorError,
)
from microcluster.register.density import (
    BranchEnsemble,
    DenseOperator,
    Representation,
    density_from_pure,
    fidelity,
    mix,
)
from microcluster.register.operators import H, X, Z, pbs_weight
from microcluster.register.qubits import QubitRole
from microcluster.register.state import PureState


def _bell(factory):
    a, b = factory.fresh(QubitRole.LEAF), factory.fresh(QubitRole.LEAF)
    return PureState.from_amplitudes((a, b), [1, 1, 1, -1]), a, b


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

class TestQubitFactory:
    def test_labels_are_unique(self, factory):
        labels = {factory.fresh(QubitRole.LEAF).label for _ in range(20)}
        assert len(labels) == 20

    def test_namespace_and_role_prefix(self, factory):
        q = factory.fresh(QubitRole.ROOT)
        assert q.label.startswith("t-r")
        assert q.role is QubitRole.ROOT

    def test_renamed_keeps_label(self, factory):
        q = factory.fresh(QubitRole.EPR_HALF, birth=3)
        leaf = q.renamed(QubitRole.LEAF)
        assert leaf.label == q.label
        assert leaf.birth == 3


# ---------------------------------------------------------------------------
# Pure states
# ---------------------------------------------------------------------------

class TestPureState:
    def test_duplicate_labels_rejected(self, factory):
        q = factory.fresh(QubitRole.LEAF)
        with pytest.raises(QubitCollisionError):
            PureState.basis((q, q), "00")

    def test_wrong_amplitude_length(self, factory):
        q = factory.fresh(QubitRole.LEAF)
        with pytest.raises(DomainError):
            PureState.from_amplitudes((q,), [1, 0, 0])

    def test_tensor_requires_disjoint_qubits(self, factory):
        state, a, _ = _bell(factory)
        with pytest.raises(QubitCollisionError):
            state.tensor(PureState.basis((a,), "0"))

    def test_apply_x(self, factory):
        q = factory.fresh(QubitRole.LEAF)
        flipped = PureState.basis((q,), "0").apply_local(q, X)
        assert list(flipped.flat()) == [0, 1]

    def test_unknown_qubit(self, factory):
        state, _, _ = _bell(factory)
        with pytest.raises(UnknownQubitError):
            state.apply_local(factory.fresh(QubitRole.LEAF), Z)

    def test_norm_of_unnormalized_pair(self, factory):
        state, _, _ = _bell(factory)
        assert state.norm2() == 4

    def test_project_remove(self, factory):
        state, a, b = _bell(factory)
        rest = state.project_remove(a, (0, 1))
        assert rest.labels == (b.label,)
        assert list(rest.flat()) == [1, -1]

    def test_reorder_is_a_relabeling_of_axes(self, factory):
        state, a, b = _bell(factory)
        swapped = state.apply_local(b, H).reorder((b.label, a.label))
        assert swapped.inner(state.apply_local(b, H)) == 8

    def test_float_backend(self, factory):
        state, _, _ = _bell(factory)
        floating = state.astype(np.complex128)
        assert not floating.is_exact
        assert floating.norm2() == pytest.approx(4)


# ---------------------------------------------------------------------------
# Density operators
# ---------------------------------------------------------------------------

class TestDensityOperators:
    @pytest.mark.parametrize("representation", list(Representation))
    def test_trace_of_pure_state(self, factory, representation):
        state, _, _ = _bell(factory)
        rho = density_from_pure(state, representation)
        assert rho.trace() == 4

    def test_representations_agree(self, factory):
        state, a, b = _bell(factory)
        weight = pbs_weight(Fraction(1, 10))
        branches = density_from_pure(state, Representation.BRANCHES).apply_local((a, b), weight)
        dense = density_from_pure(state, Representation.DENSE).apply_local((a, b), weight)
        target = PureState.from_amplitudes((a, b), [1, 1, 1, -1])
        assert isinstance(branches, BranchEnsemble)
        assert isinstance(dense, DenseOperator)
        assert branches.trace() == dense.trace()
        assert branches.overlap(target) == dense.overlap(target)

    def test_mix_needs_operands(self):
        with pytest.raises(DomainError):
            mix([])

    def test_mix_adds_traces(self, factory):
        state, a, _ = _bell(factory)
        rho = density_from_pure(state)
        total = mix([rho, rho.apply_local(a, Z)])
        assert total.trace() == 8

    def test_dense_is_hermitian(self, factory):
        state, a, _ = _bell(factory)
        rho = DenseOperator.from_pure(state).apply_local(a, H)
        assert rho.is_hermitian()

    def test_float_spectrum_is_nonnegative(self, factory):
        state, _, _ = _bell(factory)
        rho = DenseOperator.from_pure(state.astype(np.complex128))
        assert min(rho.eigenvalues()) > -1e-12

    def test_capacity_ceiling(self, factory, monkeypatch):
        monkeypatch.setattr(settings, "exact_max_qubits", 1)
        state, _, _ = _bell(factory)
        with pytest.raises(CapacityError):
            DenseOperator.from_pure(state)


# ---------------------------------------------------------------------------
# Fidelity
# ---------------------------------------------------------------------------

class TestFidelity:
    def test_state_against_itself(self, factory):
        state, _, _ = _bell(factory)
        assert fidelity(state, density_from_pure(state)) == 1

    def test_orthogonal_state(self, factory):
        state, a, _ = _bell(factory)
        rho = density_from_pure(state.apply_local(a, Z))
        assert fidelity(state, rho) == 0

    def test_zero_trace(self, factory):
        state, _, _ = _bell(factory)
        rho = density_from_pure(state).scaled(0)
        with pytest.raises(ZeroDenominatorError):
            fidelity(state, rho)

    def test_zero_target(self, factory):
        state, a, b = _bell(factory)
        zero = PureState.from_amplitudes((a, b), [0, 0, 0, 0])
        with pytest.raises(DomainError):
            fidelity(zero, density_from_pure(state))
