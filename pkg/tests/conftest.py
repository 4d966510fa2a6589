import numpy as np
import pytest

from dotgate.operators import PhysicalParams
from dotgate.statespace import enumerate_basis


@pytest.fixture(scope="session")
def basis17():
    return enumerate_basis(1)


@pytest.fixture(scope="session")
def basis21():
    return enumerate_basis(2)


@pytest.fixture(scope="session")
def paper_params():
    """T = 3.27 ps, delta = 4 meV, t_e = 1 ns, no field."""
    return PhysicalParams()


@pytest.fixture(scope="session")
def ideal_params():
    """Same device, no decay."""
    return PhysicalParams(gamma=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
