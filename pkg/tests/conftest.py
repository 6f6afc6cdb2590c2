import numpy as np
import pytest

import symzeta as sz


@pytest.fixture(scope="session")
def identity2():
    return sz.QuadraticForm.identity(2)


@pytest.fixture(scope="session")
def eisenstein2():
    # x^2 + x y + y^2 as a matrix
    return sz.QuadraticForm.from_rows([[1, "1/2"], ["1/2", 1]])


@pytest.fixture(scope="session")
def diag14():
    return sz.QuadraticForm(np.diag([1.0, 4.0]))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
