import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from factorcast.errors import (
    DegenerateVariance,
    EmptyInput,
    LengthMismatch,
    ZeroBenchmark,
    ZeroDenominator,
)
from factorcast.evaluation import (
    auto_lag,
    dm_test,
    relative_measures,
    rmse,
    score,
    u_theil,
)

vectors = arrays(np.float64, st.integers(1, 30), elements=st.floats(-1e3, 1e3))


def errors_for(d):
    """Forecast errors whose squared-loss differential is exactly d."""
    d = np.asarray(d, dtype=float)
    return np.sqrt(np.clip(d, 0, None)), np.sqrt(np.clip(-d, 0, None))


def dm_brute_force(d, K):
    T = len(d)
    m = sum(d) / T
    gam = [sum((d[t] - m) * (d[t - k] - m) for t in range(k, T)) / T for k in range(K)]
    var = gam[0] + 2 * sum(gam[1:])
    return math.sqrt(T) * m / math.sqrt(var), var


class TestRmse:
    def test_alternating(self):
        assert rmse([1, 1, 1, 1], [0, 2, 0, 2]) == 1.0

    def test_perfect(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_value(self):
        assert rmse([1, 2], [0, 0]) == pytest.approx(math.sqrt(2.5), abs=1e-12)
        assert rmse([1, 2], [0, 0]) == pytest.approx(1.5811, abs=5e-5)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            rmse([1, 2], [1])
        with pytest.raises(EmptyInput):
            rmse([], [])

    @given(vectors)
    def test_symmetric_under_negation(self, a):
        f = a[::-1]
        assert rmse(-a, -f) == pytest.approx(rmse(a, f))


class TestTheil:
    def test_perfect(self):
        assert u_theil([1.0, -2.0], [1.0, -2.0]) == 0.0

    def test_opposite(self):
        assert u_theil([1.0, -2.0, 3.0], [-1.0, 2.0, -3.0]) == pytest.approx(1.0)

    def test_zero_forecast(self):
        assert u_theil([1, 1], [0, 0]) == 1.0

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            u_theil([0, 0], [0, 0])

    @given(vectors, st.integers(0, 2**32 - 1))
    def test_bounded(self, a, seed):
        f = np.random.default_rng(seed).normal(size=a.size) * 10
        assert 0 <= u_theil(a, f) <= 1 + 1e-12

    @given(vectors, st.floats(1e-3, 1e3))
    def test_scale_invariant(self, a, c):
        f = a[::-1] + 1.0
        assert u_theil(c * a, c * f) == pytest.approx(u_theil(a, f), rel=1e-9)


class TestRelative:
    def test_rrmse_example(self):
        rr, _ = relative_measures(0.744, 0.5, 0.824, 0.5)
        assert round(rr, 3) == 0.903
        assert abs(rr - 0.902) <= 0.0015

    def test_ru_example(self):
        _, ru = relative_measures(0.5, 0.378, 0.5, 0.565)
        assert round(ru, 3) == 0.669

    def test_identical(self):
        assert relative_measures(0.3, 0.2, 0.3, 0.2) == (1.0, 1.0)

    def test_zero_benchmark(self):
        with pytest.raises(ZeroBenchmark):
            relative_measures(1.0, 0.5, 0.0, 0.5)

    def test_score_ratio_exact(self):
        a, f, b = [1.0, 2.0, 3.0], [1.5, 2.0, 2.0], [0.0, 0.0, 0.0]
        bench = score("AR", "P1", a, b)
        s = score("1FM", "P1", a, f, bench)
        assert s.rrmse == s.rmse / bench.rmse
        assert s.ru == s.u_theil / bench.u_theil


class TestDieboldMariano:
    def test_identical_errors(self):
        e = np.random.default_rng(0).normal(size=12)
        with pytest.raises(DegenerateVariance):
            dm_test(e, e, K=2)

    def test_alternating_zero_mean(self):
        d = np.array([1, -1] * 4, dtype=float)
        res = dm_test(*errors_for(d), K=1)
        assert res.statistic == 0.0
        assert res.var_dbar == pytest.approx(1.0)
        assert res.p_value == 1.0

    def test_shifted_fixture(self):
        d = np.array([1, -1] * 4, dtype=float) + 1
        res = dm_test(*errors_for(d), K=1)
        stat, var = dm_brute_force(list(d), 1)
        # gamma_0 of {2, 0, 2, 0, ...} around mean 1 is exactly 1
        assert var == 1.0
        assert res.statistic == pytest.approx(stat, abs=1e-10)
        assert res.statistic == pytest.approx(math.sqrt(8), abs=1e-10)

    @pytest.mark.parametrize("K", [1, 2, 3, 4])
    def test_brute_force(self, K):
        rng = np.random.default_rng(K)
        e1, e2 = rng.normal(size=20), 0.8 * rng.normal(size=20)
        d = list(e1**2 - e2**2)
        try:
            stat, var = dm_brute_force(d, K)
        except ValueError:
            pytest.skip("negative truncated variance for this draw")
        res = dm_test(e1, e2, K=K)
        assert res.statistic == pytest.approx(stat, abs=1e-10)
        assert res.var_dbar == pytest.approx(var, abs=1e-10)
        assert res.p_value == pytest.approx(math.erfc(abs(stat) / math.sqrt(2)), abs=1e-12)

    def test_k1_is_scaled_mean_t(self):
        rng = np.random.default_rng(11)
        e1, e2 = rng.normal(size=30), rng.normal(size=30)
        d = e1**2 - e2**2
        res = dm_test(e1, e2, K=1)
        assert res.statistic == pytest.approx(d.mean() / (d.std(ddof=0) / math.sqrt(30)))

    def test_antisymmetric(self):
        rng = np.random.default_rng(12)
        e1, e2 = rng.normal(size=24), rng.normal(size=24)
        a, b = dm_test(e1, e2, K=3), dm_test(e2, e1, K=3)
        assert a.statistic == pytest.approx(-b.statistic)
        assert a.p_value == pytest.approx(b.p_value)

    def test_auto_lag(self):
        assert auto_lag(12) == 2
        assert auto_lag(8) == 2
        assert auto_lag(4) == 2
        assert auto_lag(27) == 3
        assert dm_test(*errors_for(np.arange(12.0) - 3), K="auto").K == 2

    def test_bartlett_weights_nonnegative_variance(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            e1, e2 = rng.normal(size=12), rng.normal(size=12)
            assert dm_test(e1, e2, K=3, kernel="bartlett").var_dbar > 0

    def test_negative_flat_variance_is_degenerate(self):
        # strong negative lag-1 autocorrelation drives the flat-sum variance below zero
        d = np.array([3, -3] * 6, dtype=float) + 0.1
        with pytest.raises(DegenerateVariance):
            dm_test(*errors_for(d), K=2)

    def test_argument_checks(self):
        with pytest.raises(EmptyInput):
            dm_test([1, 2, 3], [0, 0, 0])
        with pytest.raises(ValueError):
            dm_test(np.ones(6), np.zeros(6), K=6)
        with pytest.raises(LengthMismatch):
            dm_test(np.ones(6), np.zeros(5))

    @given(arrays(np.float64, 16, elements=st.floats(-5, 5)), arrays(np.float64, 16, elements=st.floats(-5, 5)))
    def test_p_value_range(self, e1, e2):
        try:
            res = dm_test(e1, e2, K=2)
        except DegenerateVariance:
            assume(False)
        assert 0 <= res.p_value <= 1
        assert res.var_dbar > 0
