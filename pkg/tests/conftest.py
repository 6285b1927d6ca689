import pytest

from chernaudit.checks import CheckContext
from chernaudit.varieties import builtin_presentations


@pytest.fixture(scope="session")
def presentations():
    return builtin_presentations()


@pytest.fixture(scope="session")
def deg1(presentations):
    return presentations.cover("deg1")


@pytest.fixture(scope="session")
def deg0(presentations):
    return presentations.cover("deg0")


@pytest.fixture(scope="session")
def context(presentations):
    return CheckContext(presentations)
