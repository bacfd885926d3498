"""Ordinary least squares and the static (one-step) factor forecasts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InsufficientTraining, LengthMismatch, RankDeficient


@dataclass(frozen=True)
class OlsFit:
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    r_squared: float
    residuals: np.ndarray
    nobs: int
    ssr: float
    df_resid: int
    intercept: bool

    @property
    def sigma2(self) -> float:
        """Unbiased residual variance, SSR / (nobs - ncoef)."""
        return self.ssr / self.df_resid


def ols(y, X, intercept: bool = True) -> OlsFit:
    """Least squares with classical standard errors.

    Parameters
    ----------
    y : array_like, shape (n,)
    X : array_like, shape (n, k)
        Regressors, without a constant column.
    intercept : bool
        Prepend a constant. The intercept is then ``coefficients[0]``.

    Notes
    -----
    R-squared is centered when an intercept is included and uncentered
    otherwise.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != y.shape[0]:
        raise LengthMismatch(f"y has {y.shape[0]} rows, X has {X.shape[0]}")
    if intercept:
        X = np.column_stack([np.ones(len(y)), X])
    n, k = X.shape
    if k == 0:
        raise RankDeficient("empty design matrix")
    if n <= k:
        raise RankDeficient(f"{n} observations for {k} coefficients")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    if diag.min() <= max(n, k) * np.finfo(float).eps * diag.max():
        raise RankDeficient("design matrix is not of full column rank")
    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    df = n - k
    Rinv = np.linalg.inv(R)
    cov_unscaled = Rinv @ Rinv.T
    se = np.sqrt(ssr / df * np.diag(cov_unscaled))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    p = 2 * stats.t.sf(np.abs(t), df)
    tss = float(((y - y.mean()) ** 2).sum()) if intercept else float(y @ y)
    r2 = 1.0 - ssr / tss if tss > 0 else 0.0
    return OlsFit(beta, se, t, p, r2, resid, n, ssr, df, intercept)


def static_factor_regression(scores, target) -> OlsFit:
    """Regress the (standardized) target on contemporaneous factor scores, no constant."""
    scores = np.asarray(scores, dtype=float)
    target = np.asarray(target, dtype=float)
    if scores.shape[0] != target.shape[0]:
        raise LengthMismatch(f"{scores.shape[0]} score rows vs {target.shape[0]} target values")
    return ols(target, scores, intercept=False)


@dataclass(frozen=True)
class ForecastSpec:
    """One static forecasting model.

    ``holdout`` is the number P of final observations forecast out of sample;
    the pipeline converts dated windows into P.
    """
    target: str
    factors_used: int
    lags_of_target: int
    holdout: int
    horizon: int = 1
    scheme: str = "fixed"

    def __post_init__(self):
        if self.factors_used < 0 or self.lags_of_target < 0:
            raise ValueError("factor and lag counts must be non-negative")
        if self.factors_used + self.lags_of_target < 1:
            raise ValueError("a forecasting model needs at least one regressor")
        if self.holdout < 1 or self.horizon < 1:
            raise ValueError("holdout and horizon must be positive")
        if self.scheme not in ("fixed", "expanding"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


def _regressors(spec: ForecastSpec, scores, target):
    """Row t holds the predictors dated t - h (factors, then target lags)."""
    T = target.shape[0]
    h, m = spec.horizon, spec.lags_of_target
    first = h + max(m - 1, 0)
    blocks = []
    if spec.factors_used:
        blocks.append(scores[first - h:T - h, :spec.factors_used])
    for j in range(m):
        blocks.append(target[first - h - j:T - h - j, None])
    return first, np.column_stack(blocks)


def static_forecast(spec: ForecastSpec, scores, target) -> tuple[np.ndarray, OlsFit]:
    """Direct h-step forecasts of the last P target values.

    The regression of the target on lagged factors and lagged target values
    (with a constant) is fitted on observations up to T-P only; under the
    ``expanding`` scheme it is re-fitted before each forecast using every
    target value known at the forecast origin. Returns the forecast path and
    the fit behind the first forecast.
    """
    target = np.asarray(target, dtype=float)
    T = target.shape[0]
    if scores is None:
        scores = np.empty((T, 0))
    scores = np.asarray(scores, dtype=float)
    if scores.shape[0] != T:
        raise LengthMismatch(f"{scores.shape[0]} score rows vs {T} target values")
    if scores.shape[1] < spec.factors_used:
        raise ValueError(f"need {spec.factors_used} factor columns, got {scores.shape[1]}")
    P, h = spec.holdout, spec.horizon
    first, Z = _regressors(spec, scores, target)
    y = target[first:]
    # row i of (Z, y) is time first + i
    n_train = T - P - first
    ncoef = Z.shape[1] + 1
    if n_train <= ncoef:
        raise InsufficientTraining(f"{n_train} training observations for {ncoef} coefficients")
    fit = ols(y[:n_train], Z[:n_train])
    forecasts = np.empty(P)
    for i in range(P):
        row = n_train + i
        if spec.scheme == "expanding":
            # targets up to the forecast origin (row - h) are known
            current = ols(y[:row - h + 1], Z[:row - h + 1])
        else:
            current = fit
        forecasts[i] = current.coefficients[0] + Z[row] @ current.coefficients[1:]
    return forecasts, fit
