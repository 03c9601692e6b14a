import pytest
from mpmath import mp, mpf

from rieszcrit.mobius import sieve
from rieszcrit.numerics import PrecisionContext


def pytest_addoption(parser):
    parser.addoption('--run-slow', action='store_true', default=False,
                     help="also run the acceptance-scale checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption('--run-slow'):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def working_precision():
    with mp.workdps(50):
        yield


@pytest.fixture(scope='session')
def table():
    return sieve(1 << 20)


@pytest.fixture(scope='session')
def large_table():
    return sieve(1 << 24)


@pytest.fixture
def ctx():
    return PrecisionContext(50, mpf('1e-30'))


@pytest.fixture
def sweep_ctx():
    return PrecisionContext(50, mpf('1e-12'))
