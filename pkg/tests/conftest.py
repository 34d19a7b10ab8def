"""Shared test fixtures."""
import pytest

from microcluster.optics.noise import NoiseModel
from microcluster.register.qubits import QubitFactory


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running exact simulations")


@pytest.fixture()
def factory():
    """A private label namespace so tests never share qubit ids."""
    return QubitFactory("t-")


@pytest.fixture()
def ideal_noise():
    return NoiseModel.ideal()


@pytest.fixture()
def symbolic_noise():
    """alpha, p_x, p_y, p_z as independent variables."""
    return NoiseModel.symbolic()


@pytest.fixture()
def alpha_only():
    return NoiseModel.symbolic(pauli=False)


@pytest.fixture()
def equiprobable_noise():
    return NoiseModel.symbolic(alpha=False, equiprobable=True)
