import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsetw.errors import ParameterError
from sparsetw.weights import (
    WeightAssignment, WeightEnsemble, assign_weights, build_matrix, random_matrix,
)


def test_all_ones_is_adjacency(k4):
    H = random_matrix(k4, WeightEnsemble("all-ones"), 0)
    assert (H.dense == 1 - np.eye(4, dtype=int)).all()
    assert np.isclose(np.linalg.eigvalsh(H.dense.astype(float))[-1], 3.0)


def test_rademacher_values_and_determinism(k4):
    a = assign_weights(k4, WeightEnsemble("rademacher"), 5)
    assert set(a.values.tolist()) <= {-1, 1} and len(a.values) == 6
    assert (a.values == assign_weights(k4, WeightEnsemble("rademacher"), 5).values).all()
    H = build_matrix(k4, a)
    assert ((H.dense == H.dense.T) & np.isin(H.dense, [-1, 0, 1])).all()


def test_complex_unit_is_hermitian(k4):
    H = random_matrix(k4, WeightEnsemble("complex-unit"), 9)
    assert np.allclose(np.abs(H.weights.values), 1, atol=1e-12)
    assert np.abs(H.dense - H.dense.conj().T).max() <= 1e-12
    assert np.all(np.diag(H.dense) == 0)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["rademacher", "symmetric-real:two-point", "symmetric-real:uniform", "complex-unit"]),
       st.integers(0, 2**31))
def test_row_support_matches_graph(label, seed):
    from sparsetw.graph import sample_regular_graph

    g = sample_regular_graph(12, 3, seed)
    H = random_matrix(g, WeightEnsemble.from_label(label), seed)
    nz = H.dense != 0
    assert (nz.sum(axis=1) == 3).all()
    for u, v in g.edges:
        assert nz[u, v] and nz[v, u]
    assert np.abs(H.dense - H.dense.conj().T).max() <= 1e-12


def test_key_mismatch_is_rejected(k4):
    w = {e: 1 for e in k4.edges[1:]}
    with pytest.raises(ParameterError, match="missing"):
        build_matrix(k4, w)
    w = {e: 1 for e in k4.edges}
    w[(0, 0)] = 1
    with pytest.raises(ParameterError, match="extra"):
        build_matrix(k4, w)


@pytest.mark.parametrize("label", ["rademacher", "symmetric-real:uniform", "symmetric-real:two-point"])
def test_second_moment_real(label, rng):
    x = WeightEnsemble.from_label(label).draw(100_000, rng).astype(float)
    se = (x**2).std() / np.sqrt(len(x))
    assert abs((x**2).mean() - 1) <= 4 * max(se, 1e-12)
    assert abs(x.mean()) <= 4 * x.std() / np.sqrt(len(x))


def test_second_moment_complex(rng):
    z = WeightEnsemble("complex-unit").draw(100_000, rng)
    for part in (z.real, z.imag):
        se = (part**2).std() / np.sqrt(len(z))
        assert abs((part**2).mean() - 0.5) <= 4 * se


def test_finite_law_checks():
    WeightEnsemble.finite([-2, 0, 2], [0.125, 0.75, 0.125])
    with pytest.raises(ParameterError, match="symmetric"):
        WeightEnsemble.finite([-1, 2], [2 / 3, 1 / 3])
    with pytest.raises(ParameterError, match="second moment"):
        WeightEnsemble.finite([-2, 2], [0.5, 0.5])
    with pytest.raises(ParameterError):
        WeightEnsemble("gaussian")


@pytest.mark.parametrize("label", ["rademacher", "complex-unit", "symmetric-real:uniform"])
def test_json_round_trip(k4, label):
    a = assign_weights(k4, WeightEnsemble.from_label(label), 2)
    b = WeightAssignment.from_json(a.to_json())
    assert b.edges == a.edges and np.allclose(b.values, a.values)


def test_negation_closes_ensemble(k4):
    H = random_matrix(k4, WeightEnsemble("complex-unit"), 4)
    assert np.allclose(H.negated().dense, -H.dense)
