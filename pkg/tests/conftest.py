import pytest

from convopt.objective import make_log1, make_log2, make_poly1, make_rb2


@pytest.fixture
def log1():
    return make_log1()


@pytest.fixture
def log2():
    return make_log2()


@pytest.fixture
def poly1():
    return make_poly1()


@pytest.fixture
def rb2():
    return make_rb2()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
