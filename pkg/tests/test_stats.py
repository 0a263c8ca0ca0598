import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from oracles import t_test_oracle

from graphbatch import TimingRecord, aggregate, histogram, speedup, students_t_test
from graphbatch.errors import DegenerateSamples, DivisionByZero, EmptyInput, InvalidBinWidth
from graphbatch.stats import (
    histogram_from_counts,
    interquartile_range,
    pairwise_t_tests,
    regularized_incomplete_beta,
    significance_level,
    summarize,
    t_two_sided_p,
)

# Frozen from tests/oracles.py (mpmath pooled t + quadrature of the t density).
T_CASES = [
    ([1, 2, 3], [2, 3, 4], -1.224744871391589, 4, 0.28786413472669065),
    ([2.1, 3.4, 1.9, 5.6, 4.4], [6.2, 5.1, 7.7, 6.9], -3.2274544784825214, 7, 0.014502796777521604),
    ([0.512, 0.498, 0.530, 0.505, 0.521, 0.489, 0.515, 0.502, 0.527, 0.494],
     [0.531, 0.540, 0.525, 0.548, 0.536, 0.529, 0.544, 0.538, 0.533, 0.541],
     -5.478361094127748, 18, 3.336763877232212e-05),
]


def records(values):
    return [TimingRecord(i, 0.0, v) for i, v in enumerate(values)]


def test_aggregate_outlier():
    agg = aggregate(records([1, 2, 100]))["combined_time"]
    assert agg.mean == pytest.approx(103 / 3)
    assert agg.median == 2
    assert agg.std == pytest.approx(np.std([1, 2, 100], ddof=1))


def test_aggregate_single_record():
    agg = aggregate([TimingRecord(0, 1.5, 2.0)])
    assert agg["combined_time"].mean == agg["combined_time"].median == 3.5
    assert agg["combined_time"].std == 0 and agg["combined_time"].degenerate


def test_aggregate_even_median_and_empty():
    assert summarize([4, 1, 3, 2]).median == 2.5
    with pytest.raises(EmptyInput):
        aggregate([])


def test_aggregate_law_of_large_numbers():
    rng = np.random.default_rng(0)
    agg = aggregate(records(rng.uniform(0, 1, 10_000)))["update_time"]
    assert abs(agg.mean - 0.5) <= 0.01


def test_combined_identity():
    r = TimingRecord(3, 1.25, 2.5)
    assert r.combined_time == 3.75


@given(st.lists(st.floats(0, 1e6), min_size=3, max_size=50), st.floats(0, 1e9))
def test_median_robustness(values, bump):
    # With two values the maximum is a central order statistic itself.
    values = sorted(values)
    before = summarize(values)
    after = summarize(values[:-1] + [values[-1] + bump])
    assert after.median == before.median
    assert after.mean >= before.mean - 1e-9 * max(1.0, abs(before.mean))


def test_speedup():
    assert speedup(2.7, 1.0) == pytest.approx(2.7)
    assert speedup(5, 5) == 1.0
    assert speedup(7.30, 2.38) == pytest.approx(3.0672, abs=1e-4)
    with pytest.raises(DivisionByZero):
        speedup(1.0, 0.0)


@pytest.mark.parametrize("a, b, t, df, p", T_CASES)
def test_t_test_frozen_oracle(a, b, t, df, p):
    res = students_t_test(a, b)
    assert abs(res.t_statistic - t) <= 1e-6
    assert res.degrees_of_freedom == df
    assert abs(res.p_value - p) <= 1e-6


def test_t_test_live_oracle_random():
    rng = np.random.default_rng(77)
    for _ in range(5):
        a = rng.normal(0, 1, int(rng.integers(2, 12)))
        b = rng.normal(0.5, 2, int(rng.integers(2, 12)))
        t, df, p = t_test_oracle(a.tolist(), b.tolist())
        res = students_t_test(a, b)
        assert res.degrees_of_freedom == df
        assert res.t_statistic == pytest.approx(t, abs=1e-9)
        assert res.p_value == pytest.approx(p, abs=1e-9)


def test_t_test_identity_and_errors():
    res = students_t_test([1, 2, 3, 4], [1, 2, 3, 4])
    assert res.t_statistic == 0 and res.p_value == 1 and res.significance == "none"
    with pytest.raises(DegenerateSamples):
        students_t_test([2, 2, 2], [2, 2])
    with pytest.raises(EmptyInput):
        students_t_test([1], [1, 2])
    flagged = students_t_test([1, 1], [2, 2])
    assert flagged.degenerate and math.isnan(flagged.t_statistic) and flagged.p_value == 0.0


samples = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=15)


def has_spread(a, b):
    return np.var(a) + np.var(b) > 1e-6


@given(samples, samples)
def test_t_test_antisymmetry(a, b):
    assume(has_spread(a, b))
    ab, ba = students_t_test(a, b), students_t_test(b, a)
    assert ab.t_statistic == -ba.t_statistic
    assert ab.p_value == ba.p_value
    assert 0.0 <= ab.p_value <= 1.0


@given(samples, samples, st.floats(0.01, 100), st.floats(-100, 100))
@settings(deadline=None)
def test_t_test_scale_and_shift(a, b, c, k):
    assume(has_spread(a, b))
    base = students_t_test(a, b)
    scaled = students_t_test([x * c for x in a], [x * c for x in b])
    shifted = students_t_test([x + k for x in a], [x + k for x in b])
    assert scaled.t_statistic == pytest.approx(base.t_statistic, rel=1e-6, abs=1e-6)
    assert scaled.p_value == pytest.approx(base.p_value, rel=1e-6, abs=1e-9)
    assert shifted.t_statistic == pytest.approx(base.t_statistic, rel=1e-6, abs=1e-6)


@given(st.integers(1, 200), st.floats(0, 50), st.floats(0, 50))
def test_p_decreases_with_abs_t(df, t1, t2):
    lo, hi = sorted((t1, t2))
    assert t_two_sided_p(hi, df) <= t_two_sided_p(lo, df) + 1e-15
    assert t_two_sided_p(-hi, df) == t_two_sided_p(hi, df)


def test_incomplete_beta_against_scipy():
    from scipy.special import betainc
    rng = np.random.default_rng(5)
    for _ in range(2000):
        x, a, b = rng.random(), rng.uniform(0.05, 300), rng.uniform(0.05, 300)
        assert abs(regularized_incomplete_beta(x, a, b) - betainc(a, b, x)) <= 1e-9
    assert regularized_incomplete_beta(0.0, 2, 3) == 0.0
    assert regularized_incomplete_beta(1.0, 2, 3) == 1.0


@pytest.mark.parametrize("p, level", [(0.5, "none"), (0.1000001, "none"), (0.10, "moderate"),
                                      (0.07, "moderate"), (0.05, "strong"), (0.0, "strong")])
def test_significance_levels(p, level):
    assert significance_level(p) == level


def test_pairwise_matrix():
    s = {"a": [1.0, 2.0, 3.0], "b": [2.0, 3.0, 4.0], "c": [5.0, 5.5, 7.0]}
    m = pairwise_t_tests(s)
    for r in s:
        assert m[r][r].p_value == 1.0 and m[r][r].t_statistic == 0.0
        for c in s:
            assert m[r][c].p_value == m[c][r].p_value
            assert m[r][c].t_statistic == -m[c][r].t_statistic


def test_histogram_binning():
    h = histogram([0, 0.5, 1.0], 1, 0)
    assert h.counts == {0: 2, 1: 1} and h.total == 3
    assert h.rows() == [(0, 2), (1, 1)]
    empty = histogram([], 2.0)
    assert empty.counts == {} and empty.total == 0
    with pytest.raises(InvalidBinWidth):
        histogram([1], 0)


@given(st.lists(st.floats(-1e6, 1e6), max_size=100), st.floats(0.1, 100), st.floats(-50, 50))
def test_histogram_invariants(values, width, origin):
    h = histogram(values, width, origin)
    assert h.total == len(values) == sum(h.counts.values())
    for v in values:
        i = h.bin_of(v)
        assert h.counts[i] >= 1
        assert origin + i * width <= v + 1e-6 * max(1, abs(v)) and v < origin + (i + 1) * width + 1e-6 * max(1, abs(v))


def test_histogram_from_counts_and_csv(tmp_path):
    h = histogram_from_counts({3: 2, 4: 5, 9: 1}, bin_width=4)
    assert h.rows() == [(0, 2), (4, 5), (8, 1)]
    assert h.mass_at_or_above(8) == 1
    path = tmp_path / "h.csv"
    h.write_csv(path)
    assert path.read_text().splitlines() == ["bin_lower,count", "0.0,2", "4.0,5", "8.0,1"]


def test_interquartile_range():
    assert interquartile_range([31] * 10) == 0
    assert interquartile_range(list(range(1, 10))) == 4
