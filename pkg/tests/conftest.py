import numpy as np
import pytest

from fracineq.core import make_function

SMOOTH = ("convex", "abs-deriv-convex", "second-deriv-bounded")


def composed(name, fn, d1, d2, domain=(0.0, 1.0), tags=SMOOTH):
    return make_function(name, fn, domain, d1, d2, tags=tags, convention="power-composed")


def direct(name, fn, d1, d2, domain=(0.0, 1.0), tags=SMOOTH):
    return make_function(name, fn, domain, d1, d2, tags=tags, convention="direct")


@pytest.fixture
def square_composed():
    return composed("square", lambda u: u * u, lambda u: 2 * u, lambda u: 2 + 0 * u, (0.0, 40.0))


@pytest.fixture
def linear_composed():
    return composed("linear", lambda u: 3 * u + 1, lambda u: 3 + 0 * u, lambda u: 0 * u, (0.0, 40.0))


@pytest.fixture
def square_direct():
    return direct("square", lambda x: x * x, lambda x: 2 * x, lambda x: 2 + 0 * x, (0.0, 2.0))


@pytest.fixture
def exp_direct():
    return direct("exp", np.exp, np.exp, np.exp, (0.0, 3.0))


@pytest.fixture
def linear_direct():
    return direct("linear", lambda x: 2 * x - 1, lambda x: 2 + 0 * x, lambda x: 0 * x, (0.0, 3.0))
