"""Tests for EPR pairs, Type-1 fusion, Pauli noise, measurements and calibration."""
from fractions import Fraction

import pytest

from microcluster.algebra import Polynomial
from microcluster.exceptions import DomainError, ParameterError, UsageError
from microcluster.optics import (
    DEFAULT_BYPRODUCTS,
    ByproductTable,
    ErrorPlacement,
    ErrorPlacementPolicy,
    NoiseModel,
    calibrate_byproducts,
    clifford_group,
    epr,
    failure_weights,
    fuse_fail,
    fuse_success,
    joined_pair_state,
    kraus_completeness,
    measure_y_remove,
    measure_z_remove,
    pauli_channel,
    star_state,
    success_probability,
    verify_byproducts,
)
from microcluster.optics.calibration import fusion_failures
from microcluster.register.density import density_from_pure, fidelity
from microcluster.register.operators import I
from microcluster.register.qubits import QubitRole


def _two_pairs(factory):
    x1, l1 = factory.fresh(QubitRole.EPR_HALF), factory.fresh(QubitRole.LEAF)
    x2, l2 = factory.fresh(QubitRole.EPR_HALF), factory.fresh(QubitRole.LEAF, 1)
    rho = density_from_pure(epr(qubits=(x1, l1)).tensor(epr(qubits=(x2, l2))))
    return rho, x1, x2, l1, l2


def _star(factory, leaves):
    root = factory.fresh(QubitRole.ROOT)
    qubits = tuple(factory.fresh(QubitRole.LEAF, i) for i in range(leaves))
    return density_from_pure(star_state(root, qubits)), root, qubits


# ---------------------------------------------------------------------------
# Noise parameters and placement policies
# ---------------------------------------------------------------------------

class TestNoiseModel:
    def test_alpha_range(self):
        with pytest.raises(ParameterError):
            NoiseModel.numeric(Fraction(3, 5))

    def test_negative_probability(self):
        with pytest.raises(ParameterError):
            NoiseModel.numeric(0, px=Fraction(-1, 10))

    def test_probabilities_sum_to_at_most_one(self):
        with pytest.raises(ParameterError):
            NoiseModel.numeric(0, Fraction(2, 5))

    def test_float_parameter_promotes_the_rest(self):
        noise = NoiseModel(Fraction(1, 2), 0.1)
        assert isinstance(noise.alpha, float)
        assert noise.backend.value == "float"

    def test_symbolic_is_not_range_checked(self):
        NoiseModel.symbolic().validate_numeric()

    def test_kinds(self):
        assert NoiseModel.ideal().kind == "ideal"
        assert NoiseModel.symbolic().kind == "symbolic"
        assert NoiseModel.series().kind == "series"
        assert NoiseModel.numeric(0.01, 0.001).kind == "numeric"

    def test_equality_tells_backends_apart(self):
        assert NoiseModel.ideal() == NoiseModel()
        assert NoiseModel.ideal() != NoiseModel(0.0)
        assert NoiseModel(Fraction(1, 2)) != NoiseModel(0.5)
        assert len({NoiseModel.ideal(), NoiseModel(0.0), NoiseModel(0.0, 0.0)}) == 2

    def test_swapped_xy(self):
        noise = NoiseModel.numeric(0, px=Fraction(1, 10), py=Fraction(1, 50))
        swapped = noise.swapped_xy()
        assert (swapped.p_x, swapped.p_y) == (noise.p_y, noise.p_x)
        assert swapped.swapped_xy() == noise

    def test_p_fills_unset_components(self):
        noise = NoiseModel.numeric(0, Fraction(1, 10), pz=Fraction(1, 5))
        assert noise.p_x == Fraction(1, 10)
        assert noise.p_z == Fraction(1, 5)


class TestErrorPlacementPolicy:
    def test_eight_policies(self):
        policies = ErrorPlacementPolicy.all_policies()
        assert len(policies) == 8
        assert len({p.name for p in policies}) == 8

    def test_parse_accepts_dashes_and_suffix(self):
        policy = ErrorPlacementPolicy.parse("Survivor-Plus-Roots+noisy_failures")
        assert policy.placement is ErrorPlacement.SURVIVOR_PLUS_ROOTS
        assert policy.noisy_failures

    def test_parse_unknown(self):
        with pytest.raises(UsageError):
            ErrorPlacementPolicy.parse("everywhere")

    def test_default_is_survivor_only(self):
        assert ErrorPlacementPolicy().name == "survivor_only"


# ---------------------------------------------------------------------------
# Imperfect beam splitter
# ---------------------------------------------------------------------------

class TestBeamSplitter:
    @pytest.mark.parametrize("alpha", [0, Fraction(1, 10), Fraction(1, 2)])
    def test_kraus_completeness(self, alpha):
        assert kraus_completeness(alpha)

    def test_kraus_completeness_symbolic(self):
        assert kraus_completeness(Polynomial.variable("alpha"))

    def test_failure_weights(self):
        weights = failure_weights(Fraction(1, 10))
        assert weights[(0, 0)] == weights[(1, 1)] == Fraction(19, 100)
        assert weights[(0, 1)] == weights[(1, 0)] == Fraction(99, 100)

    def test_ideal_success_probability_is_half(self, factory):
        rho, x1, x2, _, _ = _two_pairs(factory)
        assert success_probability(rho, x1, x2, 0) == Fraction(1, 2)

    def test_success_probability_with_alpha(self, factory):
        rho, x1, x2, _, _ = _two_pairs(factory)
        alpha = Fraction(1, 10)
        expected = ((1 - alpha) ** 2 + alpha**2) / 2
        assert success_probability(rho, x1, x2, alpha) == expected


# ---------------------------------------------------------------------------
# Fusion
# ---------------------------------------------------------------------------

class TestFusion:
    def test_ideal_fusion_makes_a_star(self, factory):
        rho, x1, x2, l1, l2 = _two_pairs(factory)
        out, root = fuse_success(rho, x1, x2, NoiseModel.ideal(), factory=factory)
        assert root.role is QubitRole.ROOT
        assert set(out.labels) == {root.label, l1.label, l2.label}
        assert fidelity(star_state(root, (l1, l2)), out) == 1

    def test_success_trace_matches_weighted_trace(self, factory):
        rho, x1, x2, _, _ = _two_pairs(factory)
        alpha = Fraction(1, 10)
        out, _ = fuse_success(rho, x1, x2, NoiseModel(alpha), factory=factory)
        assert out.trace() == rho.trace() * success_probability(rho, x1, x2, alpha)

    def test_self_fusion_rejected(self, factory):
        rho, x1, _, _, _ = _two_pairs(factory)
        with pytest.raises(DomainError):
            fuse_success(rho, x1, x1, NoiseModel.ideal(), factory=factory)

    def test_uncorrected_fusion_fails_verification(self):
        assert fusion_failures(ByproductTable(fusion_minus=I), max_leaves=2)

    def test_failure_trace(self, factory):
        rho, x1, x2, _, _ = _two_pairs(factory)
        alpha = Fraction(1, 10)
        out = fuse_fail(rho, x1, x2, None, None, NoiseModel(alpha))
        assert out.trace() == rho.trace() * (1 - success_probability(rho, x1, x2, alpha))

    def test_failure_removes_both_photons(self, factory):
        rho, x1, x2, l1, l2 = _two_pairs(factory)
        out = fuse_fail(rho, x1, x2, None, None, NoiseModel.ideal())
        assert set(out.labels) == {l1.label, l2.label}


# ---------------------------------------------------------------------------
# Pauli channel and measurements
# ---------------------------------------------------------------------------

class TestPauliChannel:
    def test_any_pauli_on_a_leaf_is_orthogonal(self, factory):
        rho, root, (leaf,) = _star(factory, 1)
        noisy = pauli_channel(rho, leaf, NoiseModel.numeric(0, Fraction(1, 10)))
        assert fidelity(star_state(root, (leaf,)), noisy) == Fraction(7, 10)

    def test_trace_preserving(self, factory, symbolic_noise):
        rho, root, _ = _star(factory, 2)
        assert pauli_channel(rho, root, symbolic_noise).trace() == rho.trace()

    def test_noiseless_channel_checks_the_qubit(self, factory):
        rho, _, _ = _star(factory, 1)
        with pytest.raises(DomainError):
            pauli_channel(rho, factory.fresh(QubitRole.LEAF), NoiseModel.ideal())


class TestMeasurements:
    def test_z_measurement_removes_a_leaf(self, factory):
        rho, root, (l1, l2) = _star(factory, 2)
        out = measure_z_remove(rho, l2, root)
        assert fidelity(star_state(root, (l1,)), out) == 1
        assert out.trace() == rho.trace()

    def test_y_measurement_joins_the_neighbours(self, factory):
        rho, centre, (a, b) = _star(factory, 2)
        out = measure_y_remove(rho, centre, a, b)
        assert fidelity(joined_pair_state(a, b), out) == 1
        assert out.trace() == rho.trace()


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

class TestCalibration:
    def test_clifford_group_order(self):
        group = clifford_group()
        assert len(group) == 24
        assert [op.name for op in group[:4]] == ["I", "X", "Y", "Z"]

    def test_default_table_verifies(self):
        assert verify_byproducts(DEFAULT_BYPRODUCTS, max_leaves=2) == []

    def test_default_table_is_kept(self):
        assert calibrate_byproducts(DEFAULT_BYPRODUCTS, max_leaves=2) == DEFAULT_BYPRODUCTS

    def test_broken_slot_is_repaired_deterministically(self):
        broken = ByproductTable(fusion_minus=I)
        first = calibrate_byproducts(broken, max_leaves=2)
        second = calibrate_byproducts(broken, max_leaves=2)
        assert first == second
        assert verify_byproducts(first, max_leaves=2) == []
