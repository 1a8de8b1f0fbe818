import warnings

import numpy as np
import pytest

from qmpemba import (
    ThreeLevelParams,
    build_reference_system,
    decompose,
    initial_state,
    steady_state,
    vectorize,
)


@pytest.fixture(scope="session")
def params():
    return ThreeLevelParams()


@pytest.fixture(scope="session")
def system(params):
    """(W0, coupling, extended W) of the reference three-level cascade."""
    return build_reference_system(params)


@pytest.fixture(scope="session")
def data0(system):
    return decompose(system[0])


@pytest.fixture(scope="session")
def dataW(system):
    return decompose(system[2])


@pytest.fixture(scope="session")
def pss(system):
    return steady_state(system[0])


@pytest.fixture(scope="session")
def state_vectors():
    out = {}
    for label in ("alpha", "beta", "phi", "psi"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out[label] = vectorize(
                initial_state(label), allow_nonphysical=(label == "psi")
            )
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250809)
