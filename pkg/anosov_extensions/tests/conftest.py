import pytest

from anosov_extensions.cocycles import construct_inseparable
from anosov_extensions.torus import ToralAutomorphism

CAT_MAP_MATRIX = ((2, 1), (1, 1))

# Companion matrix of x^3 - x - 1, one expanding and two contracting
# eigenvalues.
HYPERBOLIC_3D_MATRIX = ((0, 1, 0), (0, 0, 1), (1, 1, 0))


def pytest_addoption(parser):
    try:
        parser.addoption("--slow", action="store_true", help="include slow tests")
    # Options are already added, e.g. if conftest is copied in a build pipeline
    # and runs twice
    except ValueError:
        pass


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: include slow tests")


def pytest_runtest_setup(item):
    def getopt(opt):
        # When using 'pytest --pyargs anosov_extensions' to test an installed
        # copy, pytest skips running our pytest_addoption() hook. Later, when
        # we call getoption(), pytest raises an error, because it doesn't
        # recognize the option we're asking about. To avoid this, we need to
        # pass a default value.
        return item.config.getoption(f"--{opt}", False)

    for opt in ["slow"]:
        if opt in item.keywords and not getopt(opt):
            pytest.skip(f"need --{opt} option to run")


@pytest.fixture(scope="session")
def cat_map():
    return ToralAutomorphism.from_matrix(CAT_MAP_MATRIX)


@pytest.fixture(scope="session")
def hyperbolic_3d():
    return ToralAutomorphism.from_matrix(HYPERBOLIC_3D_MATRIX)


@pytest.fixture(scope="session")
def construction(cat_map):
    return construct_inseparable(cat_map, 5)


@pytest.fixture(scope="session")
def constructed_cocycle(construction):
    return construction.cocycle
