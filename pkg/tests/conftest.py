import numpy as np
import pytest

from sparsetw.graph import complete_bipartite_33, complete_graph, sample_regular_graph


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k33():
    return complete_bipartite_33()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cubic8():
    return sample_regular_graph(8, 3, 1)
