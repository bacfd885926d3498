"""Augmented Dickey-Fuller testing with Schwert lag bound and AIC lag choice."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import SampleTooSmall
from .linreg import OlsFit, ols
from .series import TimeSeries, diff

SPECS = ("drift", "trend")
LEVELS = (0.01, 0.05, 0.10)

# MacKinnon (1994) response surface, constant + trend, one unit root.
# p = Phi(sum_i c_i * tau**i); the small-p polynomial applies at or below
# TAU_STAR, the large-p one above it. Outside [TAU_MIN, TAU_MAX] p clips to 0/1.
MACKINNON_TREND = {
    "version": "mackinnon-1994-ct-n1",
    "tau_min": -16.18,
    "tau_max": 0.7,
    "tau_star": -2.89,
    "small_p": (3.2512, 1.6047, 0.049588),
    "large_p": (2.5261, 0.61654, -0.37956, -0.060285),
}


@dataclass(frozen=True)
class AdfSpec:
    deterministic: str = "trend"

    def __post_init__(self):
        if self.deterministic not in SPECS:
            raise ValueError(f"deterministic term must be one of {SPECS}, got {self.deterministic!r}")


def as_spec(spec) -> AdfSpec:
    return spec if isinstance(spec, AdfSpec) else AdfSpec(spec)


@dataclass(frozen=True)
class AdfFit:
    k: int
    start: int
    fit: OlsFit
    statistic: float
    sigma2: float

    @property
    def nobs(self) -> int:
        return self.fit.nobs


@dataclass(frozen=True)
class AdfResult:
    spec: AdfSpec
    k_max: int
    k_opt: int
    aic_opt: float
    statistic: float
    p_value: float
    nobs: int
    aic_table: np.ndarray = field(repr=False)

    @property
    def reject_at(self) -> dict:
        return {level: bool(self.p_value <= level) for level in LEVELS}

    def rejects(self, level: float) -> bool:
        return bool(self.p_value <= level)


def schwert_max_lag(T: int) -> int:
    if T < 16:
        raise SampleTooSmall(f"Schwert rule needs T >= 16, got {T}")
    return int(np.floor(12.0 * (T / 100.0) ** 0.25))


def adf_fit(y, k: int, spec, start: int | None = None) -> AdfFit:
    """Fit dy_t = d_t + rho*y_{t-1} + sum_{j<=k} gamma_j*dy_{t-j} + u_t.

    The effective sample is t = start, ..., T-1 (0-based), so ``start`` must
    be at least ``k + 1``. The trend regressor is the time index t.
    ``sigma2`` is the maximum-likelihood residual variance SSR / nobs.
    """
    spec = as_spec(spec)
    y = np.asarray(y, dtype=float)
    T = y.size
    if start is None:
        start = k + 1
    if start < k + 1:
        raise ValueError(f"start={start} leaves lag {k} undefined")
    dy = np.diff(y, prepend=np.nan)
    t = np.arange(start, T)
    cols = []
    if spec.deterministic == "trend":
        cols.append(t.astype(float))
    cols.append(y[t - 1])
    for j in range(1, k + 1):
        cols.append(dy[t - j])
    X = np.column_stack(cols)
    if X.shape[0] <= X.shape[1] + 1:
        raise SampleTooSmall(f"{X.shape[0]} observations for {X.shape[1] + 1} ADF coefficients")
    fit = ols(dy[t], X, intercept=True)
    rho = 2 if spec.deterministic == "trend" else 1
    return AdfFit(k, start, fit, float(fit.t_stats[rho]), fit.ssr / fit.nobs)


def aic(f: AdfFit) -> float:
    return float(np.log(f.sigma2) + 2.0 * f.k / f.nobs)


def select_lag(y, spec, k_max: int | None = None) -> tuple[int, np.ndarray]:
    """Pick the lag minimizing AIC over 0..k_max on the common sample.

    Every candidate is fitted from t = k_max + 1, so all AIC values use the
    same number of observations. Ties go to the smaller lag.
    """
    y = np.asarray(y, dtype=float)
    if k_max is None:
        k_max = schwert_max_lag(y.size)
    table = np.array([aic(adf_fit(y, k, spec, start=k_max + 1)) for k in range(k_max + 1)])
    return int(np.argmin(table)), table


def trend_p_value(stat: float) -> float:
    c = MACKINNON_TREND
    if stat > c["tau_max"]:
        return 1.0
    if stat < c["tau_min"]:
        return 0.0
    coefs = c["small_p"] if stat <= c["tau_star"] else c["large_p"]
    return float(norm.cdf(np.polynomial.polynomial.polyval(stat, coefs)))


def drift_p_value(stat: float) -> float:
    return float(norm.cdf(stat))


def p_value(stat: float, spec) -> float:
    spec = as_spec(spec)
    return trend_p_value(stat) if spec.deterministic == "trend" else drift_p_value(stat)


def adf_test(y, spec, k_max: int | None = None) -> AdfResult:
    spec = as_spec(spec)
    y = np.asarray(y, dtype=float)
    if k_max is None:
        k_max = schwert_max_lag(y.size)
    k_opt, table = select_lag(y, spec, k_max)
    final = adf_fit(y, k_opt, spec, start=k_opt + 1)
    return AdfResult(
        spec=spec,
        k_max=k_max,
        k_opt=k_opt,
        aic_opt=float(table[k_opt]),
        statistic=final.statistic,
        p_value=p_value(final.statistic, spec),
        nobs=final.nobs,
        aic_table=table,
    )


@dataclass(frozen=True)
class IntegrationTrail:
    order: int
    results: tuple  # AdfResult per differencing round, level first


def integration_order(s, spec, level: float = 0.10, diff_spec=None, max_order: int = 2) -> IntegrationTrail:
    """Difference until the unit-root null is rejected at ``level``.

    The level series is tested with ``spec``; differenced series with
    ``diff_spec`` (defaults to ``spec``). Stops at ``max_order``.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    diff_spec = spec if diff_spec is None else diff_spec
    if not isinstance(s, TimeSeries):
        s = np.asarray(s, dtype=float)
    results = []
    for order in range(max_order + 1):
        values = s.values if isinstance(s, TimeSeries) else s
        res = adf_test(values, spec if order == 0 else diff_spec)
        results.append(res)
        if res.rejects(level) or order == max_order:
            return IntegrationTrail(order if res.rejects(level) else max_order, tuple(results))
        s = diff(s) if isinstance(s, TimeSeries) else np.diff(s)
    raise AssertionError("unreachable")
