import numpy as np
import pytest

from qchan import Ensemble, QubitState, pure_state


@pytest.fixture
def rng():
    return np.random.RandomState(20260808)


def random_state(rng) -> QubitState:
    """Uniform draw from the Poincare ball."""
    r = 0.5 * np.sqrt(rng.uniform())
    costh = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    sinth = np.sqrt(1.0 - costh * costh)
    a = 0.5 + r * costh
    b = r * sinth * np.exp(1j * phi)
    return QubitState(float(a), complex(b))


def random_pure_state(rng) -> QubitState:
    return pure_state(rng.uniform(), np.exp(2j * np.pi * rng.uniform()))


def random_ensemble(rng, n_states=None, pure=False) -> Ensemble:
    n = int(n_states) if n_states else rng.randint(1, 5)
    probs = rng.dirichlet(np.ones(n))
    draw = random_pure_state if pure else random_state
    return Ensemble(tuple((float(p), draw(rng)) for p in probs))
