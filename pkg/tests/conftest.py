import numpy as np
import pytest

from beltrami_waves import PhysicalParams, build_lattice
from beltrami_waves.dispersion import solve_c0


@pytest.fixture
def square_lattice():
    # 2pi-periodic square cell; dual generators (1,0), (0,1)
    return build_lattice((2 * np.pi, 0.0), (0.0, 2 * np.pi))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def beltrami_params():
    return PhysicalParams(alpha=0.5, gravity=1.0, beta=0.0, depth=1.0)


@pytest.fixture
def irrotational_params():
    return PhysicalParams(alpha=0.0, gravity=1.0, beta=0.0, depth=1.0)


@pytest.fixture(scope="session")
def capillary_setup():
    """The transversality-passing configuration used end to end."""
    lattice = build_lattice((2 * np.pi, 0.0), (0.0, 2 * np.pi))
    params = PhysicalParams(alpha=0.5, gravity=1.0, beta=0.5, depth=1.0)
    c0 = solve_c0(lattice, params, params.beta)
    return lattice, params.with_c0(c0)
