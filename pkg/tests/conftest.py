import pathlib
import sys

import pytest

# Add repository root to path
sys.path.insert(0, str(pathlib.Path(__file__).parent.parent))

from fragile import laurent


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: dense acceptance checks (minutes)")


@pytest.fixture
def two_step():
    """2 cos k + 0.5 e^{2ik} + 0.2i e^{-2ik}."""
    return laurent.preset("two_step")


@pytest.fixture
def hatano_nelson():
    return laurent.preset("hatano_nelson", a=1.2, b=1.1)


@pytest.fixture
def nnn():
    """The real next-nearest-neighbour symbol of the planar runs."""
    return laurent.LaurentOperator({1: 1.0, -1: 1.0, 2: 0.2, -2: 0.1})


@pytest.fixture
def hermitian_chain():
    return laurent.LaurentOperator({1: 1.0, -1: 1.0})
