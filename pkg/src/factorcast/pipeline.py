"""End-to-end run: ingest, transform, ADF screen, factor analysis, FAVAR
analysis, out-of-sample forecasts and evaluation tables."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import PipelineConfig, Window, load_config
from .errors import ConfigError, DataError, DegenerateVariance, FactorcastError
from .evaluation import dm_test, score
from .factors import (
    bartlett_sphericity,
    correlation_matrix,
    diagnostics,
    kmo,
    pca,
    scree_data,
)
from .ingest import read_csv
from .linreg import ForecastSpec, static_factor_regression, static_forecast
from .reports import ReportWriter
from .series import (
    Panel,
    TimeSeries,
    align_panel,
    apply_chain,
    diff,
    standardize,
    to_monthly,
)
from .stationarity import adf_test
from .var import (
    dynamic_forecast,
    favar_assemble,
    favar_names,
    granger_table,
    irf,
    var_estimate,
)

log = logging.getLogger(__name__)


def load_raw(cfg: PipelineConfig) -> dict[str, TimeSeries]:
    """Read each configured variable from its CSV file."""
    cache: dict[tuple, dict] = {}
    raw = {}
    for v in cfg.variables:
        key = (v.file, v.frequency)
        if key not in cache:
            if not v.file.exists():
                raise DataError(f"variable {v.name!r}: file not found: {v.file}")
            cache[key] = read_csv(v.file, v.frequency)
        series = cache[key]
        if v.column not in series:
            raise ConfigError(f"unknown variable {v.column!r}: no such column in {v.file.name}")
        s = series[v.column]
        raw[v.name] = TimeSeries(v.name, s.timestamps, s.values, s.frequency)
    return raw


@dataclass
class Prepared:
    panel: Panel  # aligned, unstandardized predictors
    target: np.ndarray  # aligned, unstandardized target
    screen_rows: list = field(default_factory=list)


def screen(name: str, s: TimeSeries, spec: str, cfg: PipelineConfig) -> tuple[TimeSeries, list[dict]]:
    """Test the transformed series; difference once if the unit root is not rejected."""
    rows = []
    res = adf_test(s.values, spec)
    stationary = res.rejects(cfg.adf_level)
    rows.append(_adf_row(name, "level", res, "keep" if stationary else "difference"))
    if stationary:
        return s, rows
    s = diff(s)
    res = adf_test(s.values, cfg.diff_adf)
    stationary = res.rejects(cfg.adf_level)
    if not stationary:
        log.warning("%s is still non-stationary after differencing (p=%.3f); kept and flagged", name, res.p_value)
    rows.append(_adf_row(name, "difference", res, "keep" if stationary else "flagged"))
    return s, rows


def _adf_row(name, stage, res, decision) -> dict:
    return {
        "variable": name,
        "stage": stage,
        "type": res.spec.deterministic,
        "optimal_aic": res.aic_opt,
        "k": res.k_opt,
        "k_max": res.k_max,
        "statistic": res.statistic,
        "p_value": res.p_value,
        "decision": decision,
    }


def prepare(cfg: PipelineConfig, raw: dict[str, TimeSeries] | None = None) -> Prepared:
    raw = load_raw(cfg) if raw is None else raw
    monthly = []
    rows = []
    for v in cfg.variables:
        try:
            s = apply_chain(to_monthly(raw[v.name]), v.transform)
            if v.screen:
                s, r = screen(v.name, s, v.adf, cfg)
                rows.extend(r)
        except FactorcastError as exc:
            raise _with_context(exc, f"variable {v.name!r}")
        monthly.append(s)
    # differencing may leave series with different starts; align trims them
    full = align_panel(monthly)
    names = [v.name for v in cfg.predictors]
    idx = [full.variable_names.index(n) for n in names]
    panel = Panel(tuple(names), full.dates, full.data[:, idx])
    return Prepared(panel, full.column(cfg.target), rows)


@dataclass
class FactorStage:
    std_panel: Panel
    std_target: np.ndarray
    fd: object
    diag: object


def factor_stage(cfg: PipelineConfig, prep: Prepared) -> FactorStage:
    std = standardize(prep.panel)
    t = prep.target
    std_target = (t - t.mean()) / t.std(ddof=1)
    fd = pca(std)
    return FactorStage(std, std_target, fd, diagnostics(fd, std, sig_level=cfg.sig_level))


def window_rows(dates: np.ndarray, w: Window) -> tuple[int, int]:
    """(end, P): rows kept through the window end and the holdout length."""
    months = dates.astype("datetime64[M]")
    end = int(np.searchsorted(months, w.end, side="right"))
    start = int(np.searchsorted(months, w.start, side="left"))
    P = end - start
    if P < 1:
        raise DataError(f"window {w.name!r} contains no observations")
    if start < 1:
        raise DataError(f"window {w.name!r} leaves no training data")
    return end, P


@dataclass
class WindowForecasts:
    window: Window
    dates: np.ndarray  # holdout dates
    actual: np.ndarray
    static: dict  # model name -> forecast path
    dynamic: dict


def window_scores(cfg: PipelineConfig, prep: Prepared, end: int, P: int, r: int):
    """Standardized training-consistent factor scores and target for rows [0, end)."""
    X = prep.panel.data[:end]
    y = prep.target[:end]
    n_train = end - P
    if cfg.factor_scores == "frozen":
        base = slice(0, n_train)
    else:
        base = slice(0, end)
    mu, sd = X[base].mean(axis=0), X[base].std(ddof=1, axis=0)
    if np.any(sd <= 0):
        raise DataError("a predictor is constant over the training window")
    Xs = (X - mu) / sd
    ys = (y - y[base].mean()) / y[base].std(ddof=1)
    fd = pca(Xs[base], r)
    return fd.project(Xs), ys


def forecast_window(cfg: PipelineConfig, prep: Prepared, w: Window) -> WindowForecasts:
    end, P = window_rows(prep.panel.dates, w)
    r = max([m.factors for m in cfg.models] + [1])
    F, y = window_scores(cfg, prep, end, P, r)
    n_train = end - P
    static, dynamic = {}, {}
    for m in cfg.models:
        try:
            if m.kind in ("ar", "static"):
                spec = ForecastSpec(cfg.target, m.factors, 1, P, 1, cfg.static_scheme)
                static[m.name], _ = static_forecast(spec, F[:, :m.factors], y)
            if m.kind in ("ar", "dynamic"):
                system = favar_assemble(F[:n_train, :m.factors], y[:n_train])
                model = var_estimate(system, cfg.var_lags)
                path = dynamic_forecast(model, system[-cfg.var_lags:], P)
                dynamic[m.name] = path[:, -1]
        except FactorcastError as exc:
            raise _with_context(exc, f"window {w.name!r}, model {m.name}")
    return WindowForecasts(w, prep.panel.dates[n_train:end], y[n_train:end], static, dynamic)


def evaluate(wf: WindowForecasts, paths: dict, benchmark: str = "AR") -> list[dict]:
    """Evaluation rows for one window and scheme; DM orientation favors the model when positive."""
    rows = []
    if benchmark not in paths:
        return rows
    bench_path = paths[benchmark]
    bench = score(benchmark, wf.window.name, wf.actual, bench_path)
    e_bench = wf.actual - bench_path
    for name, path in paths.items():
        s = score(name, wf.window.name, wf.actual, path, None if name == benchmark else bench)
        row = {"period": wf.window.name, "model": name, "rmse": s.rmse, "u": s.u_theil,
               "rrmse": s.rrmse, "ru": s.ru, "s1": None, "p_value": None, "k": None, "note": ""}
        if name != benchmark:
            try:
                dm = dm_test(e_bench, wf.actual - path, wf.window.dm_k)
                row.update(s1=dm.statistic, p_value=dm.p_value, k=dm.K)
            except DegenerateVariance:
                row.update(k=wf.window.dm_k, note="inconclusive: non-positive variance")
        rows.append(row)
    return rows


EVAL_COLUMNS = ["period", "model", "rmse", "u", "rrmse", "ru", "s1", "p_value", "k", "note"]


@dataclass
class RunReport:
    out_dir: Path
    manifest: Path
    files: list
    tables: dict


def run_pipeline(cfg: PipelineConfig | str | Path, raw: dict | None = None) -> RunReport:
    if not isinstance(cfg, PipelineConfig):
        cfg = load_config(cfg)
    out = ReportWriter(cfg.output_dir)
    tables: dict[str, list] = {}

    def emit(stem, rows, columns=None):
        tables[stem] = rows
        out.table(stem, rows, columns)

    prep = prepare(cfg, raw)
    emit("adf_levels", [r for r in prep.screen_rows if r["stage"] == "level"])
    emit("adf_differences", [r for r in prep.screen_rows if r["stage"] == "difference"],
         list(prep.screen_rows[0]) if prep.screen_rows else None)

    fs = factor_stage(cfg, prep)
    R = correlation_matrix(fs.std_panel.data)
    k = kmo(R)
    bart = bartlett_sphericity(R, fs.std_panel.T)
    if k < 0.5:
        log.warning("KMO sampling adequacy %.3f is below 0.5; continuing", k)
    adequacy = {"kmo": k, "bartlett_chi2": bart.chi2, "bartlett_df": bart.df,
                "bartlett_p_value": bart.p_value, "N": fs.std_panel.N, "T": fs.std_panel.T,
                "kaiser_count": fs.diag.kaiser_count}
    tables["sampling_adequacy"] = adequacy
    out.json("sampling_adequacy.json", adequacy)

    names = fs.std_panel.variable_names
    r = cfg.factors
    emit("scree", [vars(row) for row in scree_data(fs.fd)])
    emit("loadings", [{"variable": n, **{f"F{j + 1}": fs.fd.loadings[i, j] for j in range(r)}}
                      for i, n in enumerate(names)])
    emit("scores", [{"date": str(d), **{f"F{j + 1}": fs.fd.scores[t, j] for j in range(r)}}
                    for t, d in enumerate(fs.std_panel.dates)])
    d = fs.diag
    emit("factor_map", [{"variable": n, "corr_f1": d.corr_xf[i, 0],
                         "corr_f2": d.corr_xf[i, 1] if d.corr_xf.shape[1] > 1 else None,
                         "cos2": float(d.cos2[i, :2].sum())} for i, n in enumerate(names)])
    emit("contributions", [{"factor": f"F{j + 1}", "variable": n, "corr": d.corr_xf[i, j],
                            "corr_p_value": d.corr_p_values[i, j], "cos2": d.cos2[i, j],
                            "ctr": d.ctr[i, j], "significant": bool(d.significant[i, j]),
                            "cutoff": d.cutoff[j], "important": bool(d.ctr[i, j] > d.cutoff[j])}
                           for j in range(r) for i, n in enumerate(names)])

    reg = static_factor_regression(fs.fd.scores[:, :r], fs.std_target)
    emit("static_regression", [{"parameter": f"alpha_{j + 1}", "factor": f"F{j + 1}",
                                "estimate": reg.coefficients[j], "std_error": reg.standard_errors[j],
                                "t_stat": reg.t_stats[j], "p_value": reg.p_values[j],
                                "stars": _stars(reg.p_values[j]), "r_squared": reg.r_squared,
                                "nobs": reg.nobs} for j in range(r)])

    system_names = favar_names(r, cfg.target)
    model = var_estimate(favar_assemble(fs.fd.scores[:, :r], fs.std_target), cfg.var_lags, names=system_names)
    emit("granger", [{"equation": g.equation, "excluded": g.excluded, "F": g.F, "df": g.df_num,
                      "df_den": g.df_den, "p_value": g.p_value} for g in granger_table(model)])
    resp = irf(model, cfg.irf_horizon, cfg.irf_kind)
    emit("irf", [{"horizon": h, "response_var": rv, "shock_var": sv, "value": resp.responses[h, i, j],
                  "kind": resp.kind}
                 for h in range(cfg.irf_horizon + 1)
                 for i, rv in enumerate(system_names) for j, sv in enumerate(system_names)])

    if cfg.forecast and cfg.windows:
        fc_rows, static_rows, dynamic_rows = [], [], []
        for w in cfg.windows:
            wf = forecast_window(cfg, prep, w)
            for scheme, paths in (("static", wf.static), ("dynamic", wf.dynamic)):
                for name, path in paths.items():
                    fc_rows += [{"window": w.name, "scheme": scheme, "model": name, "date": str(dt),
                                 "actual": a, "forecast": f} for dt, a, f in zip(wf.dates, wf.actual, path)]
            static_rows += evaluate(wf, wf.static)
            dynamic_rows += evaluate(wf, wf.dynamic)
        emit("forecasts", fc_rows)
        emit("evaluation_static", static_rows, EVAL_COLUMNS)
        emit("evaluation_dynamic", dynamic_rows, EVAL_COLUMNS)

    if cfg.plots:
        from .plotting import render_all
        for p in render_all(out.out_dir, tables):
            out.register(p)

    manifest = out.manifest({"version": __version__, "config_sha256": cfg.source_hash, "seed": cfg.seed})
    return RunReport(out.out_dir, manifest, list(out.files), tables)


def _with_context(exc: Exception, where: str) -> Exception:
    exc.args = (f"{where}: {exc}",)
    return exc


def _stars(p: float) -> str:
    return "***" if p < 0.01 else "**" if p < 0.05 else "*" if p < 0.10 else ""
