import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsetw.errors import ParameterError, ResourceCapError
from sparsetw.graph import complete_graph, sample_regular_graph
from sparsetw.nbwalk import (
    chebyshev_trace, chebyshev_u_eig, chebyshev_u_traces, count_nb_closed_paths, enumerate_nb_closed_paths,
    exact_sign_average_traces, nb_matrices, nb_matrix_eig, signed_walk_sum, verify_lemma1,
    verify_lemma1_range,
)
from sparsetw.weights import WeightEnsemble, assign_weights, build_matrix, random_matrix


def test_low_orders(k4):
    A = build_matrix(k4, {e: 1 for e in k4.edges}).dense
    seq = nb_matrices(A, 3, 2)
    assert (seq[0] == np.eye(4)).all()
    assert (seq[1] == A).all()
    assert (seq[2] == A @ A - 3 * np.eye(4, dtype=int)).all()


def test_u2_expansion(k4):
    # U_2(x) = 4x^2 - 1 at x = M / (2 sqrt 2)
    A = build_matrix(k4, {e: 1 for e in k4.edges}).dense.astype(float)
    assert np.allclose(chebyshev_u_eig(A, 3, 2), A @ A / 2 - np.eye(4))


@pytest.mark.parametrize("label", ["rademacher", "complex-unit"])
def test_recursion_matches_chebyshev_form(label):
    g = sample_regular_graph(30, 4, 3)
    H = random_matrix(g, WeightEnsemble.from_label(label), 3)
    seq = nb_matrices(H.dense, 4, 20)
    for n in range(21):
        err = np.abs(seq[n] - nb_matrix_eig(H.dense, 4, n)).max()
        assert err <= 1e-8 * 3 ** (n / 2) * 30


def test_integer_input_stays_exact():
    g = sample_regular_graph(10, 3, 0)
    H = random_matrix(g, WeightEnsemble("all-ones"), 0)
    big = nb_matrices(H.dense, 3, 70)
    small = nb_matrices(H.dense, 3, 30)
    assert big[70].dtype == object and small[30].dtype == np.int64
    assert (big[30] == small[30]).all()
    # exact beyond 2^63: every row of M^(n) sums to d (d-1)^(n-1) at all-ones weights
    assert all(sum(int(x) for x in row) == 3 * 2**69 for row in big[70])


def test_chebyshev_trace_examples(k4, rng):
    H = random_matrix(k4, WeightEnsemble("rademacher"), 11)
    assert chebyshev_trace(H, 3, 0) == pytest.approx(4)
    assert chebyshev_trace(H, 3, 1) == pytest.approx(0, abs=1e-12)
    lam = np.linalg.eigvalsh(H.dense.astype(float))
    x = lam / (2 * np.sqrt(2))
    u4 = 16 * x**4 - 12 * x**2 + 1
    assert abs(chebyshev_trace(H, 3, 4) - u4.sum()) <= 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["rademacher", "complex-unit", "symmetric-real:uniform"]))
def test_block_traces_match_eigen(seed, label):
    g = sample_regular_graph(40, 3, seed)
    H = random_matrix(g, WeightEnsemble.from_label(label), seed)
    tu = chebyshev_u_traces(H, 3, 12, block=7)
    ref = [np.trace(chebyshev_u_eig(H, 3, k)).real for k in range(13)]
    assert np.allclose(tu, ref, atol=1e-8)


def test_path_count_examples(k4):
    assert enumerate_nb_closed_paths(k4, 2, True) == 0
    assert enumerate_nb_closed_paths(k4, 2, False) == 0
    assert enumerate_nb_closed_paths(k4, 3, True) == 0
    # each of the 4 triangles, 3 starting points, 2 directions
    count, paths = enumerate_nb_closed_paths(k4, 3, False, return_paths=True)
    assert count == 24 and len(set(paths)) == 24


def test_enumeration_agrees_with_dfs_counter(cubic8):
    counts = count_nb_closed_paths(cubic8, 10)
    for n in range(11):
        assert enumerate_nb_closed_paths(cubic8, n, True, return_paths=True)[0] == counts[n]


def test_unconstrained_count_is_trace_of_nb_matrix(cubic8):
    # without condition (d), the count is tr of M^(n) at all-ones weights
    A = build_matrix(cubic8, {e: 1 for e in cubic8.edges}).dense
    seq = nb_matrices(A, 3, 9)
    for n in range(3, 10):
        assert enumerate_nb_closed_paths(cubic8, n, False) == int(np.trace(seq[n]))


def test_work_cap():
    g = sample_regular_graph(20, 3, 1)
    with pytest.raises(ResourceCapError):
        enumerate_nb_closed_paths(g, 14, True, work_cap=1000)


def test_signed_walk_sum_examples(k4):
    H = random_matrix(k4, WeightEnsemble("rademacher"), 3)
    assert signed_walk_sum(k4, H, 2, 2, 0) == 1
    assert signed_walk_sum(k4, H, 0, 1, 1) == H.dense[0, 1]
    M5 = nb_matrices(H.dense, 3, 5)[5]
    for u, v in itertools.product(range(4), repeat=2):
        assert signed_walk_sum(k4, H, u, v, 5) == M5[u, v]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([(6, 3), (8, 3), (10, 3), (12, 3), (10, 4)]), st.integers(0, 2**31), st.integers(0, 8))
def test_entry_identity(Nd, seed, n):
    g = sample_regular_graph(*Nd, seed)
    H = random_matrix(g, WeightEnsemble("rademacher"), seed)
    Mn = nb_matrices(H.dense, Nd[1], n)[n]
    for u in range(0, Nd[0], 3):
        for v in range(Nd[0]):
            assert signed_walk_sum(g, H, u, v, n) == Mn[u, v]


def test_complex_entries_within_tolerance(k4):
    H = random_matrix(k4, WeightEnsemble("complex-unit"), 3)
    M4 = nb_matrices(H.dense, 3, 4)[4]
    z = signed_walk_sum(k4, H, 0, 2, 4)
    assert abs(z - M4[0, 2]) <= 1e-9 * max(1, abs(z))


def test_sign_average_by_direct_loop(k4):
    # independent oracle: loop over all 64 patterns with Fractions
    totals = [Fraction(0)] * 9
    for signs in itertools.product([-1, 1], repeat=6):
        H = build_matrix(k4, dict(zip(k4.edges, signs)))
        for n, Mn in enumerate(nb_matrices(H.dense, 3, 8)):
            totals[n] += int(np.trace(Mn))
    assert exact_sign_average_traces(k4, 8) == [t / 64 for t in totals]


def test_sign_average_identity_on_k4(k4):
    for rec in verify_lemma1_range(k4, 10):
        assert rec.equal and rec.path_count == rec.exact_sign_average
        if rec.n % 2 or rec.n in (2, 4):
            assert rec.path_count == 0
    # a triangle traversed twice is the shortest admissible path
    assert verify_lemma1(k4, 6).path_count == 24


def test_sign_average_record_cubic8(cubic8):
    rec = verify_lemma1(cubic8, 6)
    assert rec.equal
    assert rec.to_json().startswith('{"n":6,')


def test_unit_modulus_second_trace_vanishes():
    g = sample_regular_graph(50, 5, 2)
    for label in ("rademacher", "complex-unit", "all-ones"):
        H = random_matrix(g, WeightEnsemble.from_label(label), 2)
        assert abs(np.trace(nb_matrices(H.dense, 5, 2)[2])) < 1e-9


def test_too_many_edges_refused():
    with pytest.raises(ParameterError):
        verify_lemma1(sample_regular_graph(20, 3, 0), 4)
