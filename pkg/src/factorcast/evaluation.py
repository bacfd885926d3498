"""Forecast accuracy measures and the Diebold-Mariano test."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import (
    DegenerateVariance,
    EmptyInput,
    LengthMismatch,
    ZeroBenchmark,
    ZeroDenominator,
)


def _pair(actual, forecast):
    a = np.asarray(actual, dtype=float).ravel()
    f = np.asarray(forecast, dtype=float).ravel()
    if a.size != f.size:
        raise LengthMismatch(f"{a.size} actuals vs {f.size} forecasts")
    if a.size == 0:
        raise EmptyInput("empty forecast window")
    return a, f


def rmse(actual, forecast) -> float:
    a, f = _pair(actual, forecast)
    return float(np.sqrt(np.mean((a - f) ** 2)))


def u_theil(actual, forecast) -> float:
    """RMSE over the sum of the root-mean-square levels of both series."""
    a, f = _pair(actual, forecast)
    denom = np.sqrt(np.mean(a**2)) + np.sqrt(np.mean(f**2))
    if denom == 0:
        raise ZeroDenominator("actuals and forecasts are both identically zero")
    u = float(np.sqrt(np.mean((a - f) ** 2)) / denom)
    # the bound is exact (triangle inequality); anything above 1 is rounding
    return min(u, 1.0)


@dataclass(frozen=True)
class ForecastScore:
    model: str
    period: str
    rmse: float
    u_theil: float
    rrmse: float = 1.0
    ru: float = 1.0


def relative_measures(model_rmse: float, model_u: float, bench_rmse: float, bench_u: float) -> tuple[float, float]:
    if bench_rmse <= 0 or bench_u <= 0:
        raise ZeroBenchmark("benchmark RMSE and U must be positive")
    return model_rmse / bench_rmse, model_u / bench_u


def score(model: str, period: str, actual, forecast, benchmark: ForecastScore | None = None) -> ForecastScore:
    r, u = rmse(actual, forecast), u_theil(actual, forecast)
    if benchmark is None:
        return ForecastScore(model, period, r, u)
    rr, ru = relative_measures(r, u, benchmark.rmse, benchmark.u_theil)
    return ForecastScore(model, period, r, u, rr, ru)


@dataclass(frozen=True)
class DmResult:
    statistic: float
    p_value: float
    K: int
    dbar: float
    var_dbar: float
    loss: str = "squared error"
    kernel: str = "flat"


def auto_lag(T: int) -> int:
    """Round the cube root of T half-up."""
    return max(1, int(math.floor(T ** (1.0 / 3.0) + 0.5)))


def autocovariance(d, k: int) -> float:
    """Lag-k sample autocovariance with divisor T."""
    d = np.asarray(d, dtype=float)
    T = d.size
    dc = d - d.mean()
    return float(dc[k:] @ dc[:T - k] / T)


def dm_test(e1, e2, K: int | str = "auto", kernel: str = "flat") -> DmResult:
    """Diebold-Mariano test of equal squared-error loss.

    The loss differential is d_t = e1_t^2 - e2_t^2, so a positive statistic
    means the second forecast is more accurate. Long-run variance is
    gamma_0 + 2 * sum_{k=1}^{K-1} w_k gamma_k with w_k = 1 (``flat``) or
    1 - k/K (``bartlett``); the statistic sqrt(T) dbar / sqrt(var) is
    referred to N(0, 1), two-sided.

    Raises
    ------
    DegenerateVariance
        If the variance estimate is not positive; the comparison is then
        inconclusive.
    """
    a = np.asarray(e1, dtype=float).ravel()
    b = np.asarray(e2, dtype=float).ravel()
    if a.size != b.size:
        raise LengthMismatch(f"{a.size} vs {b.size} forecast errors")
    T = a.size
    if T < 4:
        raise EmptyInput(f"DM test needs at least 4 forecast errors, got {T}")
    K = auto_lag(T) if K == "auto" else int(K)
    if not 1 <= K < T:
        raise ValueError(f"lag truncation K must be in 1..{T - 1}")
    if kernel not in ("flat", "bartlett"):
        raise ValueError(f"unknown kernel {kernel!r}")
    d = a**2 - b**2
    dbar = float(d.mean())
    var = autocovariance(d, 0)
    for k in range(1, K):
        w = 1.0 if kernel == "flat" else 1.0 - k / K
        var += 2.0 * w * autocovariance(d, k)
    if not var > 0:
        raise DegenerateVariance(f"long-run variance estimate {var!r} is not positive")
    stat = math.sqrt(T) * dbar / math.sqrt(var)
    return DmResult(stat, float(2 * norm.sf(abs(stat))), K, dbar, var, kernel=kernel)
