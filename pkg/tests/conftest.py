import pytest

from clusterforge.cases import d4_rigid_summands, q4_submodules
from clusterforge.nmatrix import D4_W0_LETTERS, Word, product
from clusterforge.prepmod import build_algebra_basis, dynkin_quiver


@pytest.fixture(scope="session")
def a2_algebra():
    return build_algebra_basis("A2")


@pytest.fixture(scope="session")
def a3_algebra():
    return build_algebra_basis("A3")


@pytest.fixture(scope="session")
def d4_algebra():
    return build_algebra_basis("D4")


@pytest.fixture(scope="session")
def d4_quiver():
    return dynkin_quiver("D4")


@pytest.fixture(scope="session")
def d4_product():
    """The 12-factor product of Exercise 5.5 with parameters t1..t12."""
    return product("D4", Word.with_default_params(D4_W0_LETTERS))


@pytest.fixture(scope="session")
def d4_rigid():
    """Summands of the Example 13.3 complete rigid module plus M7*, M8*."""
    return d4_rigid_summands()


@pytest.fixture(scope="session")
def q4_submodule_list():
    return q4_submodules()
