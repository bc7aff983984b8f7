import numpy as np
import pytest

from tfe10.core.grids import Grid
from tfe10 import spectral


@pytest.fixture(scope="session")
def kernel60():
    """Standard 1-d kernel: full derivative table on [0, 60]."""
    return spectral.kernel_1d(Grid.uniform(0.0, 60.0, 4096))


@pytest.fixture(scope="session")
def kernel110():
    """Long-domain 1-d kernel for moment and evolution tests."""
    return spectral.kernel_1d(Grid.uniform(0.0, 110.0, 3072), jmax=6)


@pytest.fixture(scope="session")
def kernel2d():
    """Radial kernel in dimension 2 (dipole machinery)."""
    return spectral.kernel_radial(2, Grid.uniform(0.0, 40.0, 2048))


@pytest.fixture(scope="session")
def f0_n1():
    """Nonlinear profile at n = 1 (shared by similarity and acceptance)."""
    from tfe10.similarity import solve_f0
    return solve_f0(1.0, 1)
