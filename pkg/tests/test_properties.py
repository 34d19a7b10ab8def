"""Property-based tests for the exact algebra and the simulator invariants."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from microcluster.algebra import GaussianRational, Polynomial, TruncatedSeries, Variable, series_expand
from microcluster.optics import NoiseModel, kraus_completeness, pauli_channel, star_state
from microcluster.protocols.microcluster import build_microcluster, microcluster_fidelity, star_target
from microcluster.protocols.pair_fusion import PairFusionSpec, fuse_pair
from microcluster.register.density import DenseOperator, density_from_pure, fidelity
from microcluster.register.qubits import QubitFactory, QubitRole

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)
gaussians = st.builds(GaussianRational, fractions, fractions)
small_probability = st.fractions(min_value=0, max_value=Fraction(1, 4), max_denominator=40)
alphas = st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=40)

VARS = (Variable.P, Variable.ALPHA, Variable.P_Z)


@st.composite
def polynomials(draw):
    terms = draw(
        st.dictionaries(
            st.tuples(*(st.integers(0, 2) for _ in VARS)),
            fractions,
            max_size=4,
        )
    )
    poly = Polynomial.zero()
    for exps, coeff in terms.items():
        poly = poly + Polynomial.monomial(dict(zip(VARS, exps)), coeff)
    return poly


# ---------------------------------------------------------------------------
# Ring laws
# ---------------------------------------------------------------------------

class TestGaussianRing:
    @given(gaussians, gaussians, gaussians)
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(gaussians, gaussians)
    def test_division_inverts_multiplication(self, a, b):
        if b.is_zero():
            return
        assert (a * b) / b == a

    @given(gaussians)
    def test_abs2_is_z_times_conjugate(self, a):
        assert a * a.conjugate() == a.abs2()


class TestPolynomialRing:
    @given(polynomials(), polynomials())
    def test_commutative(self, f, g):
        assert f * g == g * f
        assert f + g == g + f

    @given(polynomials(), polynomials(), polynomials())
    def test_distributive(self, f, g, h):
        assert f * (g + h) == f * g + f * h

    @given(polynomials(), fractions)
    def test_evaluation_is_a_homomorphism(self, f, x):
        point = {v: x for v in VARS}
        assert (f * f).evaluate(point) == f.evaluate(point) * f.evaluate(point)


class TestSeries:
    CAPS = {Variable.P: 1, Variable.ALPHA: 2, Variable.P_Z: 1}

    @given(polynomials(), polynomials())
    def test_truncation_is_multiplicative(self, f, g):
        lhs = series_expand(f * g, self.CAPS)
        rhs = series_expand(f, self.CAPS) * series_expand(g, self.CAPS)
        assert lhs == rhs

    @given(polynomials())
    def test_inverse(self, f):
        s = 1 + TruncatedSeries.from_polynomial(f - f.constant_term(), self.CAPS)
        assert s * s.inverse() == 1


# ---------------------------------------------------------------------------
# Physical invariants
# ---------------------------------------------------------------------------

class TestPhysicalInvariants:
    @given(alphas)
    def test_kraus_completeness(self, alpha):
        assert kraus_completeness(alpha)

    @settings(max_examples=25, deadline=None)
    @given(small_probability, small_probability, small_probability)
    def test_channel_preserves_trace_and_hermiticity(self, px, py, pz):
        factory = QubitFactory("h-")
        root = factory.fresh(QubitRole.ROOT)
        leaves = (factory.fresh(QubitRole.LEAF), factory.fresh(QubitRole.LEAF))
        rho = DenseOperator.from_pure(star_state(root, leaves))
        noisy = pauli_channel(rho, leaves[0], NoiseModel.numeric(0, px=px, py=py, pz=pz))
        assert noisy.trace() == rho.trace()
        assert noisy.is_hermitian()

    @pytest.mark.slow
    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 0.5), st.floats(0, 0.1), st.floats(0, 0.1), st.floats(0, 0.1))
    def test_pipeline_states_are_positive(self, alpha, px, py, pz):
        noise = NoiseModel.numeric(alpha, px=px, py=py, pz=pz)
        states = [
            build_microcluster(2, noise, factory=QubitFactory("f-")).state,
            fuse_pair(PairFusionSpec(2, 1, noise), QubitFactory("g-")).state,
        ]
        for state in states:
            rho = state.to_dense()
            assert rho.is_hermitian(1e-12)
            assert min(rho.eigenvalues()) >= -1e-10

    @pytest.mark.slow
    @settings(max_examples=50, deadline=None)
    @given(alphas, small_probability)
    def test_fidelity_is_a_probability(self, alpha, p):
        value = microcluster_fidelity(3, NoiseModel.numeric(alpha, p))
        assert 0 <= value.real_fraction() <= 1

    @settings(max_examples=20, deadline=None)
    @given(alphas, small_probability, small_probability, small_probability)
    def test_px_py_exchange_symmetry(self, alpha, px, py, pz):
        noise = NoiseModel.numeric(alpha, px=px, py=py, pz=pz)
        assert microcluster_fidelity(2, noise) == microcluster_fidelity(2, noise.swapped_xy())

    @pytest.mark.slow
    @settings(max_examples=50, deadline=None)
    @given(st.text("abcxyz", min_size=1, max_size=4))
    def test_relabeling_keeps_the_fidelity(self, namespace):
        handle = build_microcluster(2, NoiseModel.numeric(Fraction(1, 10), Fraction(1, 50)))
        copy = handle.relabeled(QubitFactory(namespace + "-"))
        original = fidelity(star_target(handle), handle.state)
        assert fidelity(star_target(copy), copy.state) == original

    @settings(max_examples=10, deadline=None)
    @given(alphas)
    def test_dense_and_branch_representations_agree(self, alpha):
        factory = QubitFactory("d-")
        root = factory.fresh(QubitRole.ROOT)
        leaves = (factory.fresh(QubitRole.LEAF),)
        state = star_state(root, leaves)
        noise = NoiseModel.numeric(alpha, Fraction(1, 20))
        branches = pauli_channel(density_from_pure(state), root, noise)
        dense = pauli_channel(DenseOperator.from_pure(state), root, noise)
        assert branches.trace() == dense.trace()
        assert np.all(branches.to_dense().matrix() == dense.matrix())
