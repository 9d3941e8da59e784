import numpy as np
import pytest

from qsector.sequences import ConstantTail, PeriodicTail, ProductStateSpec

SQRT2 = np.sqrt(2.0)

UP = np.array([1.0, 0.0], dtype=np.complex128)
DOWN = np.array([0.0, 1.0], dtype=np.complex128)
PLUS = np.array([1.0, 1.0], dtype=np.complex128) / SQRT2
MINUS = np.array([1.0, -1.0], dtype=np.complex128) / SQRT2

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def random_local_state(rng, dim=2):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def all_up():
    return ProductStateSpec(2, ConstantTail(UP))


@pytest.fixture
def odd_sites_plus():
    """Site 1, 3, 5, ... in |+>, even sites in |up> (1-based indexing)."""
    return ProductStateSpec(2, PeriodicTail((PLUS, UP)))


@pytest.fixture
def all_plus():
    return ProductStateSpec(2, ConstantTail(PLUS))
