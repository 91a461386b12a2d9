import numpy as np
import pytest

from gammatrix import transforms as tr
from gammatrix.algebra import GammaMatrix, _project_constraints


def mirror(x):
    return np.concatenate((x[:1], x[:0:-1]))


def random_symmetric(rng, n):
    x = rng.standard_normal(n)
    return x + mirror(x)


def random_asymmetric(rng, n):
    x = rng.standard_normal(n)
    return x - mirror(x)


def random_gamma(rng, n, kind="G"):
    c = random_symmetric(rng, n)
    b = _project_constraints(random_symmetric(rng, n))
    if kind == "C":
        b = np.zeros(n)
    elif kind == "B":
        c = np.zeros(n)
    return GammaMatrix(c, b)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=tr.BACKENDS)
def backend(request):
    return request.param
