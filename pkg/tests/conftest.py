import numpy as np
import pytest

from cmhessian import ScalarField, inverse_iteration, make_domain


@pytest.fixture(scope="session")
def disc16():
    return make_domain("ball", (1.0,), 1, 1 / 16)


@pytest.fixture(scope="session")
def disc32():
    return make_domain("ball", (1.0,), 1, 1 / 32)


@pytest.fixture(scope="session")
def disc64():
    return make_domain("ball", (1.0,), 1, 1 / 64)


@pytest.fixture(scope="session")
def ball2_6():
    return make_domain("ball", (1.0,), 2, 1 / 6)


@pytest.fixture(scope="session")
def ones16(disc16):
    return ScalarField.constant(disc16[1], 1.0)


@pytest.fixture(scope="session")
def ones32(disc32):
    return ScalarField.constant(disc32[1], 1.0)


@pytest.fixture(scope="session")
def ones64(disc64):
    return ScalarField.constant(disc64[1], 1.0)


@pytest.fixture(scope="session")
def disc32_eigen(disc32, ones32):
    d, _ = disc32
    return inverse_iteration(d, 1, ones32)


@pytest.fixture(scope="session")
def disc64_eigen(disc64, ones64):
    d, _ = disc64
    return inverse_iteration(d, 1, ones64)


def quad_ball_field(grid, bc="zero"):
    """min(|z - c|^2 - R^2, 0) sampled on the grid of a ball domain."""
    r = grid.domain.params[0]
    c = np.asarray(grid.domain.center)
    vals = ((grid.points - c) ** 2).sum(axis=1) - r * r
    return ScalarField(grid, np.minimum(vals, 0.0), bc=bc)
