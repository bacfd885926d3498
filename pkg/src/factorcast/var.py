"""VAR(p) estimation, FAVAR assembly, recursive forecasts, Granger tests and IRFs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import CholeskyFailure, LengthMismatch, SampleTooSmall
from .linreg import ols


@dataclass(frozen=True)
class VarModel:
    variables: tuple
    p: int
    intercepts: np.ndarray  # (n,)
    coefs: np.ndarray  # (p, n, n); coefs[i-1] multiplies y_{t-i}
    residual_cov: np.ndarray  # (n, n)
    nobs: int
    intercept: bool
    residuals: np.ndarray  # (nobs, n)
    endog: np.ndarray  # (T, n) data the model was fitted on

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def df_resid(self) -> int:
        return self.nobs - (self.n * self.p + int(self.intercept))

    def companion(self) -> np.ndarray:
        n, p = self.n, self.p
        top = np.hstack(list(self.coefs))
        if p == 1:
            return top
        bottom = np.hstack([np.eye(n * (p - 1)), np.zeros((n * (p - 1), n))])
        return np.vstack([top, bottom])

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.companion()))))

    def mean(self) -> np.ndarray:
        """Unconditional mean c (I - sum Phi_i)^-1 of a stable model."""
        return np.linalg.solve(np.eye(self.n) - self.coefs.sum(axis=0), self.intercepts)


def lag_matrix(Y, p: int) -> np.ndarray:
    """Row t (t >= p) holds [y_{t-1}, ..., y_{t-p}] flattened variable-major per lag."""
    Y = np.asarray(Y, dtype=float)
    T = Y.shape[0]
    return np.hstack([Y[p - i:T - i] for i in range(1, p + 1)])


def var_estimate(Y, p: int = 1, intercept: bool = True, names=None) -> VarModel:
    """Equation-by-equation least squares on p lags of every variable.

    The residual covariance uses divisor nobs - (n*p + intercept).
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    T, n = Y.shape
    if p < 1:
        raise ValueError("lag order must be at least 1")
    if T - p <= n * p + int(intercept):
        raise SampleTooSmall(f"{T} observations cannot support a {n}-variable VAR({p})")
    names = tuple(names) if names is not None else tuple(f"y{i + 1}" for i in range(n))
    if len(names) != n:
        raise LengthMismatch(f"{len(names)} names for {n} variables")
    X = lag_matrix(Y, p)
    targets = Y[p:]
    B = []
    resid = np.empty_like(targets)
    for i in range(n):
        fit = ols(targets[:, i], X, intercept=intercept)
        B.append(fit.coefficients)
        resid[:, i] = fit.residuals
    B = np.array(B)  # (n, k)
    c = B[:, 0] if intercept else np.zeros(n)
    A = B[:, int(intercept):]
    coefs = np.stack([A[:, i * n:(i + 1) * n] for i in range(p)])
    nobs = T - p
    dof = nobs - (n * p + int(intercept))
    sigma = resid.T @ resid / dof
    sigma = (sigma + sigma.T) / 2
    return VarModel(names, p, c, coefs, sigma, nobs, intercept, resid, Y)


def favar_assemble(scores, target) -> np.ndarray:
    """Stack factor scores then the target as the system's columns."""
    scores = np.asarray(scores, dtype=float)
    target = np.asarray(target, dtype=float)
    if scores.ndim == 1:
        scores = scores[:, None]
    if scores.shape[0] != target.shape[0]:
        raise LengthMismatch(f"{scores.shape[0]} score rows vs {target.shape[0]} target values")
    return np.column_stack([scores, target])


def favar_names(r: int, target: str = "pi") -> tuple:
    return tuple(f"F{j + 1}" for j in range(r)) + (target,)


def dynamic_forecast(m: VarModel, last_obs, P: int) -> np.ndarray:
    """Iterate the VAR P steps ahead from the final p training rows.

    ``last_obs`` is ordered oldest first. No realized holdout values are used.
    """
    hist = np.asarray(last_obs, dtype=float)
    if hist.ndim == 1:
        hist = hist[:, None]
    if hist.shape != (m.p, m.n):
        raise LengthMismatch(f"need the last {m.p} rows of {m.n} variables, got {hist.shape}")
    window = list(hist)
    out = np.empty((P, m.n))
    for s in range(P):
        y = m.intercepts.copy()
        for i in range(1, m.p + 1):
            y = y + m.coefs[i - 1] @ window[-i]
        out[s] = y
        window.append(y)
    return out


@dataclass(frozen=True)
class GrangerResult:
    equation: str
    excluded: str
    F: float
    df_num: int
    df_den: int
    p_value: float


def granger_test(m: VarModel, equation: str, excluded) -> GrangerResult:
    """F-test that all lags of ``excluded`` drop out of ``equation``.

    ``excluded`` is a variable name, an iterable of names, or ``"all"`` for
    every variable other than the equation's own.
    """
    names = list(m.variables)
    i = names.index(equation)
    if isinstance(excluded, str):
        excl = [v for v in names if v != equation] if excluded == "all" else [excluded]
        label = excluded
    else:
        excl = list(excluded)
        label = "+".join(excl)
    if not excl:
        raise ValueError("nothing to exclude")
    if equation in excl:
        raise ValueError("an equation's own lags are never excluded")
    idx = [names.index(v) for v in excl]
    n, p = m.n, m.p
    X = lag_matrix(m.endog, p)
    y = m.endog[p:, i]
    drop = {lag * n + j for lag in range(p) for j in idx}
    keep = [c for c in range(n * p) if c not in drop]
    full = ols(y, X, intercept=m.intercept)
    # own lags always stay, so the restricted design is never empty
    restricted_ssr = ols(y, X[:, keep], intercept=m.intercept).ssr
    q = p * len(idx)
    dfd = m.df_resid
    F = ((restricted_ssr - full.ssr) / q) / (full.ssr / dfd)
    F = max(F, 0.0)
    return GrangerResult(equation, label, float(F), q, dfd, float(stats.f.sf(F, q, dfd)))


def granger_table(m: VarModel) -> list[GrangerResult]:
    """Every pairwise exclusion per equation, then the joint "all" row."""
    rows = []
    for eq in m.variables:
        for other in m.variables:
            if other != eq:
                rows.append(granger_test(m, eq, other))
        if m.n > 2:
            rows.append(granger_test(m, eq, "all"))
    return rows


def ma_coefficients(m: VarModel, H: int) -> np.ndarray:
    """Psi_0 = I, Psi_h = sum_{i=1}^{min(h,p)} Phi_i Psi_{h-i}."""
    psi = np.zeros((H + 1, m.n, m.n))
    psi[0] = np.eye(m.n)
    for h in range(1, H + 1):
        for i in range(1, min(h, m.p) + 1):
            psi[h] += m.coefs[i - 1] @ psi[h - i]
    return psi


@dataclass(frozen=True)
class IrfResult:
    kind: str
    responses: np.ndarray  # (H+1, n, n): [h, response i, shock j]
    variables: tuple

    @property
    def horizons(self) -> np.ndarray:
        return np.arange(self.responses.shape[0])


def irf(m: VarModel, H: int = 12, kind: str = "generalized") -> IrfResult:
    """One-standard-deviation impulse responses.

    ``orthogonalized`` shocks use the Cholesky factor of the residual
    covariance (ordering dependent); ``generalized`` shocks use the
    covariance column of the shocked equation scaled by its standard
    deviation, which does not depend on ordering.
    """
    if H < 0:
        raise ValueError("H must be non-negative")
    psi = ma_coefficients(m, H)
    S = m.residual_cov
    if kind == "orthogonalized":
        try:
            impact = np.linalg.cholesky(S)
        except np.linalg.LinAlgError as exc:
            raise CholeskyFailure("residual covariance is not positive definite") from exc
    elif kind == "generalized":
        impact = S / np.sqrt(np.diag(S))[None, :]
    else:
        raise ValueError(f"unknown IRF kind {kind!r}")
    return IrfResult(kind, psi @ impact, m.variables)
