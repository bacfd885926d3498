"""CSV ingestion: wide files (``date`` + one column per series) or long files
(``date``, ``series``, ``value``)."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DataError
from .series import TimeSeries, month_end


def quarter_end(dates) -> np.ndarray:
    """Stamp each date at the last day of its calendar quarter."""
    months = np.asarray(dates, dtype="datetime64[D]").astype("datetime64[M]").astype(np.int64)
    q_end = months - months % 3 + 2
    return month_end(q_end.astype("datetime64[M]").astype("datetime64[D]"))


def infer_frequency(dates) -> str:
    dates = np.asarray(dates, dtype="datetime64[D]")
    if dates.size < 2:
        raise DataError("cannot infer frequency from fewer than 2 dates")
    gap = float(np.median(np.diff(dates).astype(np.int64)))
    if gap <= 7:
        return "daily"
    if gap <= 45:
        return "monthly"
    return "quarterly"


def _normalize_stamps(dates, frequency):
    if frequency == "monthly":
        return month_end(dates)
    if frequency == "quarterly":
        return quarter_end(dates)
    return dates


def read_csv(path, frequency: str | None = None) -> dict[str, TimeSeries]:
    """Read every series in a CSV file, keyed by name.

    Missing cells are dropped per series. Without an explicit ``frequency``
    it is inferred from the whole date column of a wide file, or per series
    in a long file (which may mix frequencies). Monthly and
    quarterly stamps are moved to month end and quarter end respectively.
    """
    path = Path(path)
    try:
        df = pd.read_csv(path, dtype={"date": str})
    except (OSError, pd.errors.ParserError) as exc:
        raise DataError(f"{path}: {exc}") from exc
    if df.columns.empty or df.columns[0] != "date":
        raise DataError(f"{path}: first column must be 'date'")
    try:
        df["date"] = pd.to_datetime(df["date"], format="%Y-%m-%d")
    except ValueError as exc:
        raise DataError(f"{path}: dates must be ISO-8601 YYYY-MM-DD ({exc})") from exc

    long = "series" in df.columns
    if long:
        if "value" not in df.columns:
            raise DataError(f"{path}: long format needs a 'value' column")
        wide = df.pivot_table(index="date", columns="series", values="value", aggfunc="first")
    else:
        wide = df.set_index("date").sort_index()
    file_freq = frequency
    if file_freq is None and not long:
        file_freq = infer_frequency(wide.index.values.astype("datetime64[D]"))
    out = {}
    for name in wide.columns:
        col = pd.to_numeric(wide[name], errors="coerce") if wide[name].dtype == object else wide[name]
        if wide[name].dtype == object and col.isna().sum() > wide[name].isna().sum():
            raise DataError(f"{path}: column {name!r} has non-numeric entries")
        col = col.dropna().sort_index()
        dates = col.index.values.astype("datetime64[D]")
        freq = file_freq or infer_frequency(dates)
        out[str(name)] = TimeSeries(str(name), _normalize_stamps(dates, freq), col.to_numpy(float), freq)
    return out


def write_series_csv(path, series: list[TimeSeries]) -> None:
    """Write series of one frequency as a wide CSV, outer-joined on date."""
    frames = [pd.Series(s.values, index=pd.to_datetime(s.timestamps), name=s.name) for s in series]
    df = pd.concat(frames, axis=1).sort_index()
    df.index.name = "date"
    df.to_csv(path, date_format="%Y-%m-%d", float_format="%.10g")
