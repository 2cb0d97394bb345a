import numpy as np
import pytest

from models.state import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20250101)


@pytest.fixture
def random_state(rng):
    def make(n_qubits: int) -> StateVector:
        return StateVector.random_state(n_qubits, rng)
    return make


def within_sigmas(observed: float, p: float, trials: int, sigmas: float = 5.0) -> bool:
    """|observed - p| within `sigmas` binomial standard deviations."""
    sd = np.sqrt(p * (1 - p) / trials)
    return abs(observed - p) <= sigmas * sd + 1e-12
