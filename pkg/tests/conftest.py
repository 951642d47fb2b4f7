import numpy as np
import pytest

from qubitchain import ChainSpec, Scheme
from qubitchain.constants import FF


@pytest.fixture
def design1_spec():
    """Seven-qubit slow-falloff layout (xi ~ 0.25): small ground capacitance."""
    return ChainSpec(n_qubits=7, c_q=42.3 * FF, c_g=16.8 * FF, c_c=27.4 * FF,
                     scheme=Scheme.AB)


@pytest.fixture
def design2_spec():
    """Seven-qubit nearest-neighbor layout (xi << 1): large ground capacitance."""
    return ChainSpec(n_qubits=7, c_q=13.3 * FF, c_g=112.0 * FF, c_c=4.88 * FF,
                     scheme=Scheme.AB)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_chain_spec(rng, scheme=Scheme.AB, n_min=2, n_max=12):
    """Random uniform chain with capacitances spread over two decades."""
    n = int(rng.integers(n_min, n_max + 1))
    c_q, c_g, c_c = 10.0 ** rng.uniform(0.0, 2.3, size=3) * FF
    return ChainSpec(n_qubits=n, c_q=c_q, c_g=c_g, c_c=c_c, scheme=scheme)
