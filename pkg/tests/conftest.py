import numpy as np
import pytest

from rittlab import numkernel


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_diag_operator(rng, n, radius=0.85, p=2.0):
    """Diagonal operator with spectrum in the disc of given radius."""
    r = radius * np.sqrt(rng.uniform(size=n))
    ang = rng.uniform(0, 2 * np.pi, size=n)
    return numkernel.Operator(np.diag(r * np.exp(1j * ang)), p)


def random_operator(rng, n, scale=0.4, p=2.0):
    M = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
    return numkernel.Operator(M, p)
