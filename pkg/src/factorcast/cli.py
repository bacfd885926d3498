"""Command line entry point: ``factorcast run|adf|synth|eval``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import pandas as pd

from .errors import DataError, DegenerateVariance, FactorcastError
from .evaluation import dm_test, score
from .ingest import read_csv
from .reports import ReportWriter


def _cmd_run(args):
    from .pipeline import run_pipeline

    report = run_pipeline(args.config)
    print(json.dumps({"status": "ok", "output_dir": str(report.out_dir), "manifest": str(report.manifest)}))


def _cmd_adf(args):
    from .series import apply_chain, to_monthly
    from .stationarity import adf_test

    series = read_csv(args.csv)
    rows = []
    for name, s in series.items():
        s = apply_chain(to_monthly(s), args.transform or [])
        res = adf_test(s.values, args.spec)
        rows.append({"variable": name, "type": args.spec, "optimal_aic": res.aic_opt, "k": res.k_opt,
                     "statistic": res.statistic, "p_value": res.p_value,
                     "stationary": res.rejects(args.level)})
    if args.out:
        ReportWriter(args.out).table("adf", rows)
    print(pd.DataFrame(rows).to_string(index=False))


def _cmd_synth(args):
    from .synthetic import write_synthetic

    paths = write_synthetic(args.out, args.seed, args.months)
    print(json.dumps({k: str(v) for k, v in paths.items()}))


def _load_forecasts(path) -> pd.DataFrame:
    df = pd.read_csv(path)
    if {"model", "forecast"} <= set(df.columns):
        return df.pivot_table(index="date", columns="model", values="forecast", aggfunc="first")
    return df.set_index("date")


def _cmd_eval(args):
    actual = pd.read_csv(args.actual).set_index("date")
    if actual.shape[1] < 1:
        raise DataError(f"{args.actual}: needs a date column and one value column")
    actual = actual.iloc[:, 0]
    fc = _load_forecasts(args.forecasts)
    fc = fc.loc[fc.index.isin(actual.index)]
    if fc.empty:
        raise DataError("forecasts share no dates with the actuals")
    a = actual.loc[fc.index].to_numpy(float)
    if args.benchmark not in fc.columns:
        raise DataError(f"benchmark model {args.benchmark!r} not found among {list(fc.columns)}")
    bench_path = fc[args.benchmark].to_numpy(float)
    bench = score(args.benchmark, args.period, a, bench_path)
    rows = []
    for model in fc.columns:
        path = fc[model].to_numpy(float)
        s = score(model, args.period, a, path, None if model == args.benchmark else bench)
        row = {"period": args.period, "model": model, "rmse": s.rmse, "u": s.u_theil,
               "rrmse": s.rrmse, "ru": s.ru, "s1": None, "p_value": None, "k": None}
        if model != args.benchmark:
            try:
                dm = dm_test(a - bench_path, a - path, args.k)
                row.update(s1=dm.statistic, p_value=dm.p_value, k=dm.K)
            except DegenerateVariance:
                row["k"] = args.k
        rows.append(row)
    if args.out:
        ReportWriter(args.out).table("evaluation", rows)
    print(pd.DataFrame(rows).to_string(index=False))


def _k(value):
    return value if value == "auto" else int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factorcast", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the full pipeline from a TOML config")
    p.add_argument("config", type=Path)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("adf", help="ADF test every series in a CSV file")
    p.add_argument("csv", type=Path)
    p.add_argument("--spec", choices=["trend", "drift"], default="trend")
    p.add_argument("--level", type=float, choices=[0.01, 0.05, 0.10], default=0.10)
    p.add_argument("--transform", nargs="*", choices=["log", "diff"], help="transforms applied before testing")
    p.add_argument("--out", type=Path, help="write adf.csv/adf.json here")
    p.set_defaults(func=_cmd_adf)

    p = sub.add_parser("synth", help="write a synthetic factor-model dataset and config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--months", type=int, default=84)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("eval", help="score forecasts against actuals")
    p.add_argument("--actual", type=Path, required=True, help="CSV: date, value")
    p.add_argument("--forecasts", type=Path, required=True,
                   help="CSV: date plus one column per model, or long date, model, forecast")
    p.add_argument("--k", type=_k, default="auto", help="DM lag truncation or 'auto'")
    p.add_argument("--benchmark", default="AR")
    p.add_argument("--period", default="P")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except FactorcastError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
