import numpy as np
import pytest

from decolab import BipartiteState, ModeDims, QubitPure


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_density(rng, n: int) -> np.ndarray:
    """Hilbert-Schmidt random density matrix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(rng, d_a: int, d_b: int) -> BipartiteState:
    return BipartiteState(random_density(rng, d_a * d_b), ModeDims(d_a, d_b))


def random_qubit_pure(rng, min_concurrence: float = 0.0) -> QubitPure:
    while True:
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v = v / np.linalg.norm(v)
        psi = QubitPure(*v)
        if 2.0 * abs(psi.alpha * psi.delta - psi.beta * psi.gamma) >= min_concurrence:
            return psi


def bell_pure() -> QubitPure:
    s = 1.0 / np.sqrt(2.0)
    return QubitPure(s, 0.0, 0.0, s)
