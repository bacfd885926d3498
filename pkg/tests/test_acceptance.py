"""Acceptance suite: one test per criterion, each recording a pass/fail line.

Tolerances and sample counts are the contract values; nothing here is tuned
to the implementation.
"""
import math
import time

import numpy as np
import pytest

from factorcast import pipeline, synthetic
from factorcast.config import load_config
from factorcast.errors import DegenerateVariance
from factorcast.evaluation import dm_test, relative_measures, rmse, u_theil
from factorcast.factors import bartlett_sphericity, diagnostics, objective, pca
from factorcast.linreg import ols
from factorcast.series import Panel, standardize
from factorcast.stationarity import p_value, schwert_max_lag, trend_p_value
from factorcast.var import (
    VarModel,
    dynamic_forecast,
    granger_test,
    irf,
    lag_matrix,
    var_estimate,
)


def std_panel(X):
    dates = (np.datetime64("2000-01", "M") + np.arange(X.shape[0])).astype("datetime64[D]")
    return standardize(Panel(tuple(f"v{i}" for i in range(X.shape[1])), dates, X))


def random_panel(rng, n_max=8, t_max=200, t_min=None):
    N = int(rng.integers(2, n_max + 1))
    T = int(rng.integers(t_min or N + 3, t_max + 1))
    return std_panel(rng.normal(size=(T, N)) @ rng.normal(size=(N, N)))


def simulate_var(rng, Phi, T, burn=100):
    n = Phi.shape[0]
    Y = np.zeros((T + burn, n))
    e = rng.standard_normal((T + burn, n))
    for t in range(1, T + burn):
        Y[t] = Phi @ Y[t - 1] + e[t]
    return Y[burn:]


def test_01_bartlett_df(acceptance_line):
    R = np.eye(11)
    timings = []
    for _ in range(20):
        t0 = time.perf_counter()
        df = bartlett_sphericity(R, 84).df
        timings.append(time.perf_counter() - t0)
    elapsed = min(timings)
    ok = df == 55 and elapsed < 1e-3
    acceptance_line(1, "Bartlett df", ok, f"N=11 -> df={df}, {elapsed * 1e3:.3f} ms")
    assert ok


def test_02_relative_measures(acceptance_line):
    # (model, benchmark, reference ratio)
    cases = [(0.744, 0.824, 0.902), (0.667, 0.824, 0.809), (0.461, 0.565, 0.815), (0.378, 0.565, 0.669)]
    got = [relative_measures(m, 1.0, b, 1.0)[0] for m, b, _ in cases]
    worst = max(abs(g - c[2]) for g, c in zip(got, cases))
    ok = worst <= 0.0015
    acceptance_line(2, "relative-measure arithmetic", ok,
                    ", ".join(f"{g:.4f}" for g in got) + f" (max |diff| {worst:.4f})")
    assert ok


def test_03_drift_p_value(acceptance_line):
    p = p_value(-2.15, "drift")
    ok = 0.0155 <= p <= 0.0170
    acceptance_line(3, "ADF drift p-value", ok, f"stat -2.15 -> p={p:.5f}")
    assert ok


def test_04_schwert(acceptance_line):
    k = schwert_max_lag(84)
    acceptance_line(4, "Schwert rule", k == 11, f"T=84 -> k_max={k}")
    assert k == 11


def test_05_mackinnon(acceptance_line):
    pts = {-3.96: 0.01, -3.41: 0.05, -3.13: 0.10}
    got = {s: trend_p_value(s) for s in pts}
    worst = max(abs(got[s] - lvl) for s, lvl in pts.items())
    ok = worst <= 0.012
    acceptance_line(5, "MacKinnon trend calibration", ok,
                    ", ".join(f"{s}->{got[s]:.4f}" for s in pts) + f" (max |diff| {worst:.4f})")
    assert ok


def test_06_pca_invariants(acceptance_line):
    rng = np.random.default_rng(20240601)
    worst = dict(ortho=0.0, eigsum=0.0, cos2=0.0, ctr=0.0)
    t0 = time.perf_counter()
    for _ in range(1000):
        X = random_panel(rng)
        fd = pca(X)
        d = diagnostics(fd, X)
        worst["ortho"] = max(worst["ortho"], np.abs(fd.loadings.T @ fd.loadings - np.eye(X.N)).max())
        worst["eigsum"] = max(worst["eigsum"], abs(fd.eigenvalues.sum() - X.N))
        worst["cos2"] = max(worst["cos2"], np.abs(d.cos2.sum(axis=1) - 1).max())
        worst["ctr"] = max(worst["ctr"], np.abs(d.ctr.sum(axis=0) - 1).max())
    elapsed = time.perf_counter() - t0
    ok = (worst["ortho"] <= 1e-10 and worst["eigsum"] <= 1e-8 and worst["cos2"] <= 1e-8
          and worst["ctr"] <= 1e-10 and elapsed < 30)
    acceptance_line(6, "PCA invariant suite", ok,
                    ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", {elapsed:.1f} s")
    assert ok


def test_07_pca_optimality(acceptance_line):
    rng = np.random.default_rng(7)
    violations = 0
    checks = 0
    t0 = time.perf_counter()
    for _ in range(50):
        X = random_panel(rng, n_max=5, t_max=15)
        fd = pca(X)
        for r in range(1, X.N):
            best = objective(X.data, fd.loadings[:, :r])
            for _ in range(500):
                Q, _ = np.linalg.qr(rng.normal(size=(X.N, r)))
                checks += 1
                violations += objective(X.data, Q) < best * (1 - 1e-12) - 1e-12
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60
    acceptance_line(7, "PCA optimality oracle", ok, f"{violations} violations in {checks} comparisons, {elapsed:.1f} s")
    assert ok


def test_08_var_oracle(acceptance_line):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        p = int(rng.integers(1, 4))
        T = int(rng.integers(n * p + 20, 200))
        Y = rng.normal(size=(T, n)).cumsum(axis=0) * 0.2 + rng.normal(size=(T, n))
        m = var_estimate(Y, p)
        X = lag_matrix(Y, p)
        for i in range(n):
            ref = ols(Y[p:, i], X)
            coef = np.concatenate([[m.intercepts[i]], *[m.coefs[lag, i] for lag in range(p)]])
            worst = max(worst, np.abs(coef - ref.coefficients).max())
    Phi = np.array([[0.6, 0.2], [-0.1, 0.5]])
    c = np.array([0.3, -0.2])
    Phi *= 0.8 / np.max(np.abs(np.linalg.eigvals(Phi)))
    model = VarModel(("a", "b"), 1, c, Phi[None], np.eye(2), 100, True, np.zeros((100, 2)), np.zeros((101, 2)))
    y0 = np.array([2.0, -1.5])
    path = dynamic_forecast(model, y0[None], 80)
    mu = np.linalg.solve(np.eye(2) - Phi, c)
    closed = np.array([mu + np.linalg.matrix_power(Phi, s) @ (y0 - mu) for s in range(1, 81)])
    fc_err = np.abs(path - closed).max()
    ok = worst <= 1e-10 and fc_err <= 1e-8
    acceptance_line(8, "VAR estimation oracle", ok, f"max coef diff {worst:.1e}, forecast diff {fc_err:.1e}")
    assert ok


@pytest.mark.slow
def test_09_granger_size_power(acceptance_line):
    t0 = time.perf_counter()
    null = np.array([[0.5, 0.0], [0.3, 0.4]])
    alt = np.array([[0.3, 0.5], [0.0, 0.5]])
    size = np.mean([granger_test(var_estimate(simulate_var(np.random.default_rng(s), null, 200)), "y1", "y2").p_value
                    < 0.05 for s in range(500)])
    power = np.mean([granger_test(var_estimate(simulate_var(np.random.default_rng(10_000 + s), alt, 200)), "y1",
                                  "y2").p_value < 0.05 for s in range(500)])
    elapsed = time.perf_counter() - t0
    ok = 0.03 <= size <= 0.07 and power >= 0.9 and elapsed < 300
    acceptance_line(9, "Granger size/power", ok, f"size {size:.3f}, power {power:.3f}, {elapsed:.1f} s")
    assert ok


def test_10_generalized_irf_invariance(acceptance_line):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 6))
        A = rng.normal(size=(n, n))
        Phi = 0.7 * A / np.max(np.abs(np.linalg.eigvals(A)))
        Y = simulate_var(rng, Phi, 300) @ np.triu(rng.normal(size=(n, n)) * 0.3 + np.eye(n))
        perm = rng.permutation(n)
        a = irf(var_estimate(Y, 1), 12, "generalized").responses
        b = irf(var_estimate(Y[:, perm], 1), 12, "generalized").responses
        worst = max(worst, np.abs(b - a[:, perm][:, :, perm]).max())
    ok = worst <= 1e-10
    acceptance_line(10, "generalized IRF order invariance", ok, f"max diff {worst:.1e} over 20 systems")
    assert ok


def brute_force_dm(e1, e2, K):
    d = [a * a - b * b for a, b in zip(e1, e2)]
    T = len(d)
    m = math.fsum(d) / T
    gam = [math.fsum((d[t] - m) * (d[t - k] - m) for t in range(k, T)) / T for k in range(K)]
    var = gam[0] + 2 * math.fsum(gam[1:])
    if var <= 0:
        return None
    return math.sqrt(T) * m / math.sqrt(var)


def test_11_dm_oracle(acceptance_line):
    rng = np.random.default_rng(11)
    worst, degenerate, asym = 0.0, 0, 0
    for _ in range(200):
        T = int(rng.integers(4, 40))
        K = int(rng.integers(1, min(T, 6)))
        e1 = rng.normal(size=T) * rng.uniform(0.2, 2.0)
        e2 = rng.normal(size=T) * rng.uniform(0.2, 2.0)
        ref = brute_force_dm(e1, e2, K)
        if ref is None:
            with pytest.raises(DegenerateVariance):
                dm_test(e1, e2, K)
            degenerate += 1
            continue
        a, b = dm_test(e1, e2, K), dm_test(e2, e1, K)
        worst = max(worst, abs(a.statistic - ref))
        asym += a.statistic != -b.statistic or a.p_value != b.p_value
    ok = worst <= 1e-10 and asym == 0
    acceptance_line(11, "DM test oracle", ok,
                    f"max diff {worst:.1e}, {asym} antisymmetry failures, {degenerate} degenerate fixtures agreed")
    assert ok


@pytest.mark.slow
def test_12_end_to_end_replication(acceptance_line, tmp_path):
    t0 = time.perf_counter()
    cfg = load_config(synthetic.write_synthetic(tmp_path, 0, T=84)["config"])
    p1 = next(w for w in cfg.windows if w.name == "P1")
    wins = 0
    for seed in range(200):
        sim = synthetic.simulate(seed, 84)
        raw = {s.name: s for group in synthetic.to_series(sim).values() for s in group}
        prep = pipeline.prepare(cfg, raw)
        wf = pipeline.forecast_window(cfg, prep, p1)
        assert wf.actual.size == 12
        fm, ar = wf.static["2FM"], wf.static["AR"]
        rr = rmse(wf.actual, fm) / rmse(wf.actual, ar)
        ru = u_theil(wf.actual, fm) / u_theil(wf.actual, ar)
        wins += rr < 1 and ru < 1
    elapsed = time.perf_counter() - t0
    rate = wins / 200
    ok = rate >= 0.9 and elapsed < 600
    acceptance_line(12, "end-to-end synthetic replication", ok,
                    f"2FM RRMSE<1 and RU<1 in {wins}/200 seeds ({rate:.1%}), {elapsed:.1f} s")
    assert ok


def test_13_u_theil_bound(acceptance_line):
    rng = np.random.default_rng(13)
    violations = 0
    n_pairs = 100_000
    lengths = rng.integers(1, 25, size=n_pairs)
    for i in range(n_pairs):
        n = lengths[i]
        a = rng.normal(size=n) * 10.0 ** rng.uniform(-3, 3)
        mode = i % 4
        if mode == 0:
            f = rng.normal(size=n) * 10.0 ** rng.uniform(-3, 3)
        elif mode == 1:
            f = -a * rng.uniform(0, 5)
        elif mode == 2:
            f = a * rng.uniform(0, 5)
        else:
            f = np.zeros(n)
        u = u_theil(a, f)
        violations += not 0.0 <= u <= 1.0
    ok = violations == 0
    acceptance_line(13, "U-Theil bound", ok, f"{violations} violations over {n_pairs} pairs")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
