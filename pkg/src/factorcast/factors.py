"""Principal-component factor extraction and its diagnostics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ConvergenceFailure, NonPositiveDeterminant, SingularMatrix
from .series import Panel


def correlation_matrix(X) -> np.ndarray:
    return np.corrcoef(np.asarray(X, dtype=float), rowvar=False)


def kmo(R) -> float:
    """Overall Kaiser-Meyer-Olkin sampling adequacy.

    Partial correlations come from the inverse of ``R``. With no off-diagonal
    correlation at all the index is defined as 0.
    """
    R = np.asarray(R, dtype=float)
    try:
        S = np.linalg.inv(R)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    if not np.all(np.isfinite(S)) or np.linalg.cond(R) > 1e14:
        raise SingularMatrix("correlation matrix is numerically singular")
    d = np.sqrt(np.diag(S))
    Q = -S / np.outer(d, d)
    off = ~np.eye(R.shape[0], dtype=bool)
    r2 = float((R[off] ** 2).sum())
    q2 = float((Q[off] ** 2).sum())
    if r2 == 0.0:
        return 0.0
    return r2 / (r2 + q2)


@dataclass(frozen=True)
class BartlettResult:
    chi2: float
    df: int
    p_value: float


def bartlett_sphericity(R, T: int) -> BartlettResult:
    R = np.asarray(R, dtype=float)
    N = R.shape[0]
    sign, logdet = np.linalg.slogdet(R)
    if sign <= 0:
        raise NonPositiveDeterminant("correlation matrix determinant is not positive")
    chi2 = -(T - 1 - (2 * N + 5) / 6.0) * logdet
    df = N * (N - 1) // 2
    chi2 = chi2 + 0.0  # no negative zero
    return BartlettResult(float(chi2), df, float(stats.chi2.sf(chi2, df)))


@dataclass(frozen=True)
class FactorDecomposition:
    eigenvalues: np.ndarray  # (N,), descending
    loadings: np.ndarray  # (N, r) unit eigenvectors
    scores: np.ndarray  # (T, r) = X @ loadings
    explained_share: np.ndarray  # (N,)
    residuals: np.ndarray  # (T, N)
    variable_names: tuple = ()

    @property
    def r(self) -> int:
        return self.loadings.shape[1]

    @property
    def cumulative_share(self) -> np.ndarray:
        return np.cumsum(self.explained_share)

    @property
    def kaiser_count(self) -> int:
        return kaiser_count(self.eigenvalues)

    def project(self, X) -> np.ndarray:
        """Scores of new (already standardized) rows under these loadings."""
        return np.asarray(X, dtype=float) @ self.loadings


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude coordinate of each column positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def pca(p: Panel | np.ndarray, r: int | None = None) -> FactorDecomposition:
    """Eigendecomposition of the sample covariance of a standardized panel.

    On standardized data (divisor T-1) the covariance is the correlation
    matrix, so eigenvalues sum to N and score column j has sample variance
    equal to eigenvalue j. ``r`` defaults to N.
    """
    if isinstance(p, Panel):
        X, names = p.data, p.variable_names
    else:
        X, names = np.asarray(p, dtype=float), ()
    T, N = X.shape
    r = N if r is None else r
    if not 1 <= r <= N:
        raise ValueError(f"r must be in 1..{N}, got {r}")
    C = X.T @ X / (T - 1)
    C = (C + C.T) / 2
    try:
        w, V = np.linalg.eigh(C)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(w)[::-1]
    w = w[order]
    V = _fix_signs(V[:, order])
    L = V[:, :r]
    F = X @ L
    return FactorDecomposition(
        eigenvalues=w,
        loadings=L,
        scores=F,
        explained_share=w / w.sum(),
        residuals=X - F @ L.T,
        variable_names=tuple(names),
    )


def kaiser_count(eigenvalues) -> int:
    return int(np.sum(np.asarray(eigenvalues) > 1.0))


@dataclass(frozen=True)
class FactorDiagnostics:
    corr_xf: np.ndarray
    cos2: np.ndarray
    ctr: np.ndarray
    corr_p_values: np.ndarray
    significant: np.ndarray
    cutoff: np.ndarray
    kaiser_count: int
    cumulative_share: np.ndarray


def correlation_p_values(rho, T: int) -> np.ndarray:
    """Two-sided p-values of t = rho*sqrt((T-2)/(1-rho^2)) on T-2 df."""
    rho = np.asarray(rho, dtype=float)
    with np.errstate(divide="ignore"):
        t = rho * np.sqrt((T - 2) / np.maximum(1.0 - rho**2, 0.0))
    return 2 * stats.t.sf(np.abs(t), T - 2)


def diagnostics(fd: FactorDecomposition, p: Panel | np.ndarray, r: int | None = None,
                sig_level: float = 0.10) -> FactorDiagnostics:
    """Variable-factor correlations, cos2, contributions and cutoffs.

    Correlations are computed from the data, not from the loadings. The
    cutoff of factor j averages the contributions of the variables whose
    correlation with that factor is significant at ``sig_level``; it is NaN
    when no variable qualifies.
    """
    X = p.data if isinstance(p, Panel) else np.asarray(p, dtype=float)
    T, N = X.shape
    r = fd.r if r is None else r
    if not 1 <= r <= fd.r:
        raise ValueError(f"r must be in 1..{fd.r}")
    if not 0 < sig_level < 1:
        raise ValueError("sig_level must lie in (0, 1)")
    F = fd.scores[:, :r]
    Xc = X - X.mean(axis=0)
    Fc = F - F.mean(axis=0)
    sx = np.sqrt((Xc**2).sum(axis=0))
    sf = np.sqrt((Fc**2).sum(axis=0))
    denom = np.outer(sx, sf)
    tiny = denom <= 1e-12 * max(1.0, denom.max())
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(tiny, 0.0, (Xc.T @ Fc) / np.where(tiny, 1.0, denom))
    corr = np.clip(corr, -1.0, 1.0)
    cos2 = corr**2
    col = cos2.sum(axis=0)
    ctr = cos2 / np.where(col > 0, col, 1.0)
    pv = correlation_p_values(corr, T)
    sig = pv < sig_level
    cutoff = np.array([ctr[sig[:, j], j].mean() if sig[:, j].any() else np.nan for j in range(r)])
    return FactorDiagnostics(
        corr_xf=corr,
        cos2=cos2,
        ctr=ctr,
        corr_p_values=pv,
        significant=sig,
        cutoff=cutoff,
        kaiser_count=kaiser_count(fd.eigenvalues),
        cumulative_share=fd.cumulative_share,
    )


@dataclass(frozen=True)
class ScreeRow:
    component: int
    eigenvalue: float
    share: float
    cumulative: float


def scree_data(fd: FactorDecomposition | np.ndarray) -> list[ScreeRow]:
    w = fd.eigenvalues if isinstance(fd, FactorDecomposition) else np.asarray(fd, dtype=float)
    share = w / w.sum()
    cum = np.cumsum(share)
    return [ScreeRow(i + 1, float(w[i]), float(share[i]), float(cum[i])) for i in range(w.size)]


def objective(X, loadings) -> float:
    """Sum of squared reconstruction errors of X by F L' with F = X L."""
    X = np.asarray(X, dtype=float)
    F = X @ loadings
    E = X - F @ loadings.T
    return float((E**2).sum())
