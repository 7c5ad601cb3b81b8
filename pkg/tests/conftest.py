import math

import numpy as np
import pytest

from algint import equilibrium_interval, serre_mixture

SERRE_A, SERRE_B, SERRE_C = 0.1715, 5.8255, 0.5004


@pytest.fixture(scope="session")
def eq22():
    return equilibrium_interval(-2.0, 2.0)


@pytest.fixture(scope="session")
def serre():
    return serre_mixture(SERRE_A, SERRE_B, SERRE_C)


@pytest.fixture()
def rng():
    return np.random.default_rng(np.random.PCG64(20240817))


def arcsine_samples(rng, n, a=-2.0, b=2.0):
    """Exact arcsine draws on [a, b] for Monte Carlo oracles."""
    u = rng.random(n)
    return (a + b) / 2 + (b - a) / 2 * np.sin(math.pi * (u - 0.5))
