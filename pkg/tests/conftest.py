import numpy as np
import pytest

from liemax import builtin


@pytest.fixture(scope="session")
def heis():
    return builtin("heisenberg3")


@pytest.fixture(scope="session")
def se2():
    return builtin("se2")


@pytest.fixture(scope="session")
def sh2():
    return builtin("sh2")


@pytest.fixture(scope="session")
def so3():
    return builtin("so3")


@pytest.fixture(scope="session")
def engel():
    return builtin("engel4")


@pytest.fixture(scope="session")
def all_bundles(heis, se2, sh2, so3, engel):
    return [heis, se2, sh2, so3, engel]


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
