import pytest

from wqslattice import corpus
from wqslattice.lattice import enumerate_wqs
from wqslattice.marketfile import parse_market
from wqslattice.matchings import parse_matching

# filled by test_acceptance, printed once at the end of the session
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda k: int(k.split()[1].rstrip(":"))):
        terminalreporter.write_line(f"{name} {ACCEPTANCE[name]}")


@pytest.fixture(scope="session")
def ex1():
    return corpus.load("example1")


@pytest.fixture(scope="session")
def ex2():
    return corpus.load("example2")


@pytest.fixture(scope="session")
def quota3():
    return corpus.load("quota3")


@pytest.fixture(scope="session")
def lat1(ex1):
    return enumerate_wqs(ex1)


@pytest.fixture(scope="session")
def lat2(ex2):
    return enumerate_wqs(ex2)


@pytest.fixture(scope="session")
def tiny():
    return parse_market("firms: f1\nworkers: w1\npref w1: f1\npref f1: {w1}\n")


@pytest.fixture
def mm():
    """Shorthand: ``mm(market, "(w1,-)")`` parses tuple notation."""
    return parse_matching
