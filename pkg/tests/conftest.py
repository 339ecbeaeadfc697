import numpy as np
import pytest

from zenolab.qcore import (
    AbsorbingPotential,
    GaussianPacketSpec,
    SpatialGrid,
    make_gaussian,
    make_profile,
)


@pytest.fixture(scope="session")
def std_grid():
    return SpatialGrid(-40.0, 60.0, 4096)


@pytest.fixture(scope="session")
def std_packet(std_grid):
    return make_gaussian(GaussianPacketSpec(10.0, 1.0, -5.0), std_grid)


@pytest.fixture(scope="session")
def step_potential():
    return AbsorbingPotential(400.0, make_profile("constant"))


@pytest.fixture
def rng():
    return np.random.default_rng(171717)


def random_state(grid, rng):
    """Smooth random normalized state for transform/identity tests."""
    amps = rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points)
    # band-limit to keep states physically representable
    ft = np.fft.fft(amps)
    ft[np.abs(grid.k) > 0.5 * grid.k_max] = 0.0
    amps = np.fft.ifft(ft)
    amps /= np.sqrt(np.sum(np.abs(amps) ** 2) * grid.dx)
    from zenolab.qcore import WaveFunction

    return WaveFunction(grid, amps)
