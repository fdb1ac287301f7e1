import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sparsetw.errors import ParameterError
from sparsetw.mckay import (
    NAMED_PATTERNS, SubgraphPattern, falling_factorial, fl_bounds, mc_subgraph_frequency, mckay_check,
    single_edge_probability,
)


def test_falling_factorial_examples():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(7, 0) == 1
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert falling_factorial(3, 5) == 0
    assert caught


@given(st.integers(0, 300), st.integers(0, 40))
def test_falling_factorial_naive_oracle(a, b):
    if b > a:
        return
    naive = 1
    for i in range(b):
        naive *= a - i
    assert falling_factorial(a, b) == naive == math.perm(a, b)


def test_pattern_validation():
    with pytest.raises(ParameterError):
        SubgraphPattern(((0, 0),))
    with pytest.raises(ParameterError):
        SubgraphPattern(((0, 1), (1, 0)))
    t = NAMED_PATTERNS["triangle"]
    assert t.degrees == {0: 2, 1: 2, 2: 2} and t.n_edges == 3


def _direct_bounds(edges, N, d):
    """Straight transcription with math.perm in floating point."""
    EG, EL = d * N // 2, len(edges)
    deg = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    base = math.prod(math.perm(d, l) for l in deg.values()) / (2**EL * math.perm(EG, EL))
    top = 1 - d * (d + 1) / (2 * (EG - EL - 2 * d * (d + 1)))
    bot = 1 + d * d / (2 * (EG - 2 * d * d - (math.e - 1) / math.e * EL))
    xi = (top / bot) ** EL * math.perm(EG, EL) / math.perm(EG - 1, EL)
    Xi = math.perm(EG, EL) / math.perm(EG - 2 * d * d, EL)
    return xi * base, Xi * base


@pytest.mark.parametrize("name", list(NAMED_PATTERNS))
@pytest.mark.parametrize("N,d", [(50, 3), (80, 3), (60, 4), (500, 5)])
def test_bounds_match_transcription(name, N, d):
    b = fl_bounds(NAMED_PATTERNS[name], N, d)
    lo, hi = _direct_bounds(NAMED_PATTERNS[name].edges, N, d)
    assert b.lower == pytest.approx(max(lo, 0), rel=1e-12)
    assert b.upper == pytest.approx(hi, rel=1e-12)
    assert 0 <= b.lower <= b.upper <= 1


def test_single_edge_base_and_exact_value():
    for N, d in [(50, 3), (80, 3), (60, 4), (1000, 3)]:
        b = fl_bounds(NAMED_PATTERNS["edge"], N, d)
        assert b.base == pytest.approx(d / N, rel=1e-14)
        assert b.lower <= float(single_edge_probability(N, d)) <= b.upper
    # d/N (1 + O(d^2/N)): the relative width shrinks like 1/N
    w1 = fl_bounds(NAMED_PATTERNS["edge"], 1000, 3)
    w2 = fl_bounds(NAMED_PATTERNS["edge"], 4000, 3)
    assert (w2.upper - w2.lower) / w2.base < 0.3 * (w1.upper - w1.lower) / w1.base


def test_base_telescopes():
    # adding a disjoint edge multiplies base by d^2 / (2 (E_G - E_L))
    N, d = 60, 4
    L = SubgraphPattern(((0, 1), (1, 2)))
    L2 = SubgraphPattern(((0, 1), (1, 2), (5, 6)))
    EG = d * N // 2
    assert fl_bounds(L2, N, d).base / fl_bounds(L, N, d).base == pytest.approx(d * d / (2 * (EG - 2)))


def test_long_pattern_uses_log_space():
    N, d = 400, 3
    cycle = SubgraphPattern(tuple((i, (i + 1) % 40) for i in range(40)))
    b = fl_bounds(cycle, N, d)
    lo, hi = _direct_bounds(cycle.edges, N, d)
    assert b.upper == pytest.approx(hi, rel=1e-10) and b.lower == pytest.approx(lo, rel=1e-10)


def test_hypothesis_refusal():
    with pytest.raises(ParameterError, match="3d"):
        fl_bounds(NAMED_PATTERNS["edge"], 20, 3)
    star = SubgraphPattern(((0, 1), (0, 2), (0, 3), (0, 4)))
    with pytest.raises(ParameterError, match="degree"):
        fl_bounds(star, 100, 3)


def test_single_edge_frequency_exact_symmetry():
    f = mc_subgraph_frequency(NAMED_PATTERNS["edge"], 20, 3, 20000, 5)
    assert abs(f.estimate - 3 / 19) <= 4 * f.standard_error
    assert single_edge_probability(20, 3) == Fraction(3, 19)


def test_k4_contains_every_triangle():
    assert mc_subgraph_frequency(NAMED_PATTERNS["triangle"], 4, 3, 50, 0).estimate == 1.0


def test_label_out_of_range():
    with pytest.raises(ParameterError):
        mc_subgraph_frequency(SubgraphPattern(((0, 9),)), 8, 3, 10, 0)


def test_threads_do_not_change_results():
    pats = [NAMED_PATTERNS[k] for k in ("edge", "triangle")]
    a = mckay_check(pats, 50, 3, 3000, 17, threads=1)
    b = mckay_check(pats, 50, 3, 3000, 17, threads=4)
    assert [x.to_json() for x in a] == [x.to_json() for x in b]


def test_sandwich_small_run():
    checks = mckay_check([NAMED_PATTERNS[k] for k in NAMED_PATTERNS], 60, 4, 10000, 3)
    assert all(c.within_bounds for c in checks)
