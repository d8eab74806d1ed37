import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from qfed import CONSTANTS, Layer, Stack
from qfed.fixtures import UM, random_stack

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def lossy_layer(thick: bool):
    return st.builds(
        lambda er, ei, mr, mi, d, T: Layer(complex(er, ei), complex(mr, mi), d * UM if thick else None, T),
        st.floats(1.0, 8.0), st.floats(0.01, 1.0), st.floats(1.0, 3.0), st.floats(0.01, 0.5),
        st.floats(0.1, 2.0), st.floats(0.0, 600.0),
    )


@st.composite
def lossy_stacks(draw, min_layers=2, max_layers=5):
    n = draw(st.integers(min_layers, max_layers))
    inner = [draw(lossy_layer(True)) for _ in range(n - 2)]
    left, right = draw(lossy_layer(False)), draw(lossy_layer(False))
    origin = draw(st.floats(-2.0, 2.0)) * UM
    return Stack((left, *inner, right), origin)


energies = st.floats(0.05, 1.0).map(CONSTANTS.omega_from_ev)


def window(stack, pad=1.0):
    if stack.N == 0:
        return stack.origin - pad * UM, stack.origin + pad * UM
    return stack.interfaces[0] - pad * UM, stack.interfaces[-1] + pad * UM


@pytest.fixture(scope="session")
def rand5():
    return random_stack()


@pytest.fixture(scope="session")
def omega_rand():
    return CONSTANTS.omega_from_ev(0.5)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
