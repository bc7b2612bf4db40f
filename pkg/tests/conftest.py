import pytest

from fibpant.bench import bundled_problem


@pytest.fixture(scope="session")
def ex1():
    return bundled_problem(1)


@pytest.fixture(scope="session")
def ex2():
    return bundled_problem(2)


@pytest.fixture(scope="session")
def ex3():
    return bundled_problem(3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
