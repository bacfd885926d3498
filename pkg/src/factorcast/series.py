"""Time-series containers, frequency conversion and the panel transforms.

Dates are stored as ``numpy.datetime64[D]`` arrays. Monthly observations are
always stamped at the last calendar day of their month.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    EmptyIntersection,
    FrequencyError,
    NonPositiveValue,
    TooFewKnots,
    TooShort,
    ZeroVariance,
)

FREQUENCIES = ("daily", "monthly", "quarterly")


def month_index(dates) -> np.ndarray:
    """Months since 1970-01 for each date."""
    return np.asarray(dates, dtype="datetime64[D]").astype("datetime64[M]").astype(np.int64)


def month_end(dates) -> np.ndarray:
    months = np.asarray(dates, dtype="datetime64[D]").astype("datetime64[M]")
    return (months + 1).astype("datetime64[D]") - np.timedelta64(1, "D")


def _month_end_from_index(idx) -> np.ndarray:
    months = np.asarray(idx, dtype=np.int64).astype("datetime64[M]")
    return (months + 1).astype("datetime64[D]") - np.timedelta64(1, "D")


@dataclass(frozen=True)
class TimeSeries:
    name: str
    timestamps: np.ndarray
    values: np.ndarray
    frequency: str = "monthly"

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype="datetime64[D]")
        vals = np.asarray(self.values, dtype=float)
        if self.frequency not in FREQUENCIES:
            raise FrequencyError(f"unknown frequency {self.frequency!r}")
        if ts.ndim != 1 or vals.ndim != 1 or ts.shape != vals.shape:
            raise ValueError(f"{self.name}: timestamps and values must be 1-d of equal length")
        if ts.size > 1 and np.any(np.diff(ts) <= np.timedelta64(0, "D")):
            raise ValueError(f"{self.name}: timestamps must be strictly increasing")
        if ts.size > 1 and self.frequency != "daily":
            steps = np.diff(month_index(ts))
            if np.any(steps < 1):
                raise FrequencyError(f"{self.name}: more than one observation per month")
            if self.frequency == "quarterly" and np.any(steps % 3):
                raise FrequencyError(f"{self.name}: quarterly points must be 3 months apart")
        ts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    def with_values(self, values, timestamps=None, **changes) -> "TimeSeries":
        ts = self.timestamps if timestamps is None else timestamps
        return replace(self, timestamps=ts, values=values, **changes)


def log_transform(s: TimeSeries) -> TimeSeries:
    bad = np.flatnonzero(~(s.values > 0))
    if bad.size:
        i = bad[0]
        raise NonPositiveValue(str(s.timestamps[i]), float(s.values[i]))
    return s.with_values(np.log(s.values))


def diff(s: TimeSeries) -> TimeSeries:
    if len(s) < 2:
        raise TooShort(f"{s.name}: need at least 2 observations to difference")
    return s.with_values(np.diff(s.values), timestamps=s.timestamps[1:])


def monthly_average(s: TimeSeries) -> TimeSeries:
    """Average the available daily observations of each calendar month."""
    if s.frequency != "daily":
        raise FrequencyError(f"{s.name}: monthly_average expects daily data, got {s.frequency}")
    months = month_index(s.timestamps)
    uniq, inverse, counts = np.unique(months, return_inverse=True, return_counts=True)
    means = np.bincount(inverse, weights=s.values) / counts
    return TimeSeries(s.name, _month_end_from_index(uniq), means, "monthly")


def spline_interpolate(s: TimeSeries) -> TimeSeries:
    """Natural cubic spline through quarterly knots, evaluated every month.

    Knots sit at the month index of each quarterly stamp (the last month of the
    quarter by convention), so the output runs from the first to the last knot
    month inclusive and reproduces every knot value.
    """
    if s.frequency != "quarterly":
        raise FrequencyError(f"{s.name}: spline_interpolate expects quarterly data, got {s.frequency}")
    if len(s) < 4:
        raise TooFewKnots(f"{s.name}: need at least 4 quarterly points, got {len(s)}")
    knots = month_index(s.timestamps)
    grid = np.arange(knots[0], knots[-1] + 1)
    spline = CubicSpline(knots.astype(float), s.values, bc_type="natural")
    values = spline(grid.astype(float))
    # exact pass-through at the knots
    values[knots - knots[0]] = s.values
    return TimeSeries(s.name, _month_end_from_index(grid), values, "monthly")


def to_monthly(s: TimeSeries) -> TimeSeries:
    if s.frequency == "daily":
        return monthly_average(s)
    if s.frequency == "quarterly":
        return spline_interpolate(s)
    return s


@dataclass(frozen=True)
class Panel:
    variable_names: tuple
    dates: np.ndarray
    data: np.ndarray
    scaling: tuple | None = field(default=None)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        names = tuple(self.variable_names)
        if data.ndim != 2 or data.shape != (dates.size, len(names)):
            raise ValueError(f"panel shape {data.shape} does not match {dates.size} dates x {len(names)} names")
        if np.isnan(data).any():
            raise ValueError("panel contains missing cells")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "variable_names", names)

    @property
    def T(self) -> int:
        return self.data.shape[0]

    @property
    def N(self) -> int:
        return self.data.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.variable_names.index(name)]

    def rows(self, stop: int) -> "Panel":
        return Panel(self.variable_names, self.dates[:stop], self.data[:stop], self.scaling)


def standardize(p: Panel, scaling: Sequence[tuple[float, float]] | None = None) -> Panel:
    """Center and scale each column (sample sd, divisor T-1).

    If ``scaling`` is given, those (mean, sd) pairs are applied instead of the
    panel's own moments, e.g. to project holdout rows with training moments.
    """
    if scaling is None:
        mean = p.data.mean(axis=0)
        sd = p.data.std(axis=0, ddof=1)
        for name, m, s in zip(p.variable_names, mean, sd):
            # relative guard: constant columns leave rounding noise around 1e-16*|mean|
            if not np.isfinite(s) or s <= 1e-12 * max(1.0, abs(m)):
                raise ZeroVariance(name)
    else:
        mean = np.array([m for m, _ in scaling], dtype=float)
        sd = np.array([s for _, s in scaling], dtype=float)
    data = (p.data - mean) / sd
    stored = tuple((float(m), float(s)) for m, s in zip(mean, sd))
    return Panel(p.variable_names, p.dates, data, stored)


def align_panel(series: Sequence[TimeSeries]) -> Panel:
    """Stack monthly series on their common dates, in the order given."""
    if not series:
        raise EmptyIntersection("no series to align")
    for s in series:
        if s.frequency != "monthly":
            raise FrequencyError(f"{s.name}: align_panel expects monthly series, got {s.frequency}")
    common = series[0].timestamps
    for s in series[1:]:
        common = np.intersect1d(common, s.timestamps)
    if common.size == 0:
        raise EmptyIntersection("series share no common dates: " + ", ".join(s.name for s in series))
    cols = []
    for s in series:
        idx = np.searchsorted(s.timestamps, common)
        cols.append(s.values[idx])
    return Panel(tuple(s.name for s in series), common, np.column_stack(cols))


TRANSFORMS = {"log": log_transform, "diff": diff}


def apply_chain(s: TimeSeries, chain: Sequence[str]) -> TimeSeries:
    for step in chain:
        try:
            fn = TRANSFORMS[step]
        except KeyError:
            raise ValueError(f"unknown transform {step!r}") from None
        s = fn(s)
    return s
