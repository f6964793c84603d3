import numpy as np
import pytest

from grinv.posets import FinitePoset, grid_poset


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def grid22():
    return grid_poset(2, 2, (0, 0))


@pytest.fixture(scope="session")
def grid33():
    return grid_poset(3, 3, (0, 0))


@pytest.fixture(scope="session")
def chain4():
    return FinitePoset.chain(4)


def brute_force_intervals(poset):
    """Independent oracle: filter all nonempty subsets by the definition."""
    from itertools import combinations

    out = []
    for size in range(1, poset.n + 1):
        for ms in combinations(range(poset.n), size):
            if poset.is_interval_subset(ms):
                out.append(ms)
    return out


def brute_force_connected(poset):
    from itertools import combinations

    out = []
    for size in range(1, poset.n + 1):
        for ms in combinations(range(poset.n), size):
            if poset.is_connected_subset(ms):
                out.append(ms)
    return out
