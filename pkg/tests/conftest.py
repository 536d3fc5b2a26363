import sys

import pytest

from frobord.numfield import builtin_spec


@pytest.fixture(scope="session")
def cubic():
    return builtin_spec("cubic7")


@pytest.fixture(scope="session")
def quartic():
    return builtin_spec("quartic17")


@pytest.fixture(scope="session")
def quad3():
    return builtin_spec("quad3")


@pytest.fixture(scope="session")
def quad2():
    return builtin_spec("quad2")


@pytest.fixture(scope="session")
def cbrt2():
    return builtin_spec("cbrt2")


@pytest.fixture(scope="session")
def quadm1():
    return builtin_spec("quadm1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
