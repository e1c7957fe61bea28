import numpy as np
import pytest

from rmmcopula import clayton, efgm, flip_second, independence, lower_bound, upper_bound

# lines recorded by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def Pi():
    return independence()


@pytest.fixture
def M():
    return upper_bound()


@pytest.fixture
def W():
    return lower_bound()


BASES = {
    "pi": independence,
    "m": upper_bound,
    "w": lower_bound,
    "efgm(0.5)": lambda: efgm(0.5),
    "efgm(-0.5)": lambda: efgm(-0.5),
    "clayton(-0.7)": lambda: clayton(-0.7),
}


def reflected(C):
    return flip_second(C)
