import numpy as np
import pytest

from h2consensus import Network

SIX_TREE_EDGES = [(1, 2), (2, 3), (3, 4), (3, 5), (3, 6)]
ASSIGNMENT_1 = [0.1, 0.2, 0.4, 0.1, 0.1, 0.1]
ASSIGNMENT_2 = [0.1, 0.2, 0.1, 0.1, 0.1, 0.4]

_acceptance_lines = []


@pytest.fixture
def path2():
    return Network.from_lists(2, [(1, 2)])


@pytest.fixture
def triangle():
    return Network.from_lists(3, [(1, 2), (2, 3), (1, 3)])


@pytest.fixture
def six_tree():
    return Network.from_lists(6, SIX_TREE_EDGES, epsilon=ASSIGNMENT_1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
