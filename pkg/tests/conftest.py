import pytest
from hypothesis import HealthCheck, settings

from nflin.io import load_example

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def examples():
    return {name: load_example(name) for name in ("ex1", "ex1_k3", "ex2", "ex3", "ex4", "ex5")}


# acceptance lines are echoed both live (-s) and in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
