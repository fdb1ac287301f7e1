import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from sparsetw.errors import ParameterError, ResourceCapError
from sparsetw.graph import (
    RegularGraph, complete_graph, contains_subgraph, enumerate_regular_graphs, isomorphism_classes,
    sample_regular_graph, validate_regular,
)
from sparsetw.mckay import NAMED_PATTERNS


def test_n4_is_always_k4():
    for seed in range(5):
        g = sample_regular_graph(4, 3, seed)
        assert g.edges == complete_graph(4).edges
        assert g.n_edges == 6


@pytest.mark.parametrize("N,d", [(5, 3), (3, 3), (10, 2), (4, 4)])
def test_invalid_parameters(N, d):
    with pytest.raises(ParameterError):
        sample_regular_graph(N, d, 0)


def test_d2_message_names_precondition():
    with pytest.raises(ParameterError, match="d >= 3"):
        sample_regular_graph(10, 2, 0)


def test_restart_cap():
    with pytest.raises(ResourceCapError):
        sample_regular_graph(12, 9, 0, max_restarts=1)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 40), st.integers(3, 6), st.integers(0, 2**32))
def test_samples_are_valid_and_deterministic(N, d, seed):
    if d >= N or (N * d) % 2:
        return
    g = sample_regular_graph(N, d, seed)
    assert validate_regular(g) == []
    assert g == sample_regular_graph(N, d, seed)
    assert all(list(x) == sorted(x) for x in g.adjacency)
    assert nx.is_regular(nx.Graph(list(g.edges))) and g.n_edges == N * d // 2


def test_validate_reports_violations():
    k4 = complete_graph(4)
    assert validate_regular(k4) == []
    cut = RegularGraph.from_edges(4, k4.edges[1:], degree=3)
    problems = validate_regular(cut)
    assert sum("degree" in p for p in problems) == 2
    dup = RegularGraph.from_edges(4, list(k4.edges) + [(0, 1)], degree=3)
    assert any("multi" in p or "repeat" in p or "duplicate" in p for p in validate_regular(dup))


def test_json_round_trip(cubic8):
    text = cubic8.to_json()
    assert json.loads(text)["edges"] == sorted(json.loads(text)["edges"])
    assert RegularGraph.from_json(text) == cubic8


def test_contains_subgraph(k4, k33):
    assert contains_subgraph(k4, NAMED_PATTERNS["edge"])
    assert not contains_subgraph(k33, NAMED_PATTERNS["edge"])
    assert contains_subgraph(k4, NAMED_PATTERNS["triangle"])
    with pytest.raises(ParameterError):
        contains_subgraph(k4, [(0, 7)])


def test_brute_force_counts():
    # labelled cubic graphs: 1 on 4 vertices, 70 on 6, 19355 on 8
    assert sum(1 for _ in enumerate_regular_graphs(4, 3)) == 1
    six = list(enumerate_regular_graphs(6, 3))
    assert len(six) == 70
    classes = sorted(c for _, c in isomorphism_classes(six))
    assert classes == [10, 60]


def test_uniform_on_six_vertices():
    labelled = {g.edges: i for i, g in enumerate(enumerate_regular_graphs(6, 3))}
    counts = [0] * len(labelled)
    n = 100_000
    for seed in range(n):
        counts[labelled[sample_regular_graph(6, 3, seed).edges]] += 1
    assert chisquare(counts).pvalue > 0.01
    bipartite = sum(c for e, c in zip(labelled, counts) if nx.is_bipartite(nx.Graph(list(e))))
    assert abs(bipartite / n - 10 / 70) < 4 * (10 / 70 * 60 / 70 / n) ** 0.5
