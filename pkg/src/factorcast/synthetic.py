"""Synthetic factor-model panels with known parameters.

Latent factors follow independent AR(1) processes. Each observed monthly
growth rate is a loading-weighted sum of factors plus idiosyncratic noise,
and the target inflation rate depends on its own lag and on lagged factors.
The generator writes price-like levels so that the usual log / difference
chain recovers the stationary rates.

Seeds: the master seed feeds ``numpy.random.SeedSequence``; child 0 drives
the factors, child 1 the idiosyncratic noise, child 2 the target shocks and
child 3 the daily sampling noise.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import BadSpec
from .ingest import write_series_csv
from .series import TimeSeries, month_end


@dataclass(frozen=True)
class DgpSpec:
    """Descriptor of the simulated economy."""
    factor_ar: tuple = (0.6, 0.4)
    # one row per observed variable, one column per factor
    loadings: tuple = (
        (0.9, 0.0), (0.8, 0.1), (0.85, 0.0), (0.7, 0.2), (0.75, 0.0),
        (0.0, 0.9), (0.1, 0.8), (0.0, 0.85), (0.2, 0.7), (0.0, 0.75),
    )
    idio_sd: float = 0.5
    target_ar: float = 0.2
    target_loadings: tuple = (0.8, 0.5)
    target_sd: float = 0.5
    target_intercept: float = 0.0
    # which observed variables are sampled daily / quarterly (by index)
    daily: tuple = (4,)
    quarterly: tuple = (9,)
    start: str = "2013-01"
    burn_in: int = 50

    @property
    def n_factors(self) -> int:
        return len(self.factor_ar)

    @property
    def n_vars(self) -> int:
        return len(self.loadings)

    def names(self) -> list[str]:
        return [f"X{i + 1:02d}" for i in range(self.n_vars)]

    def validate(self):
        L = np.asarray(self.loadings, dtype=float)
        if L.ndim != 2 or L.shape[1] != self.n_factors:
            raise BadSpec(f"loadings must be {self.n_vars} x {self.n_factors}")
        if any(abs(a) >= 1 for a in self.factor_ar) or abs(self.target_ar) >= 1:
            raise BadSpec("AR coefficients must lie inside (-1, 1)")
        if len(self.target_loadings) != self.n_factors:
            raise BadSpec("target needs one loading per factor")
        if self.idio_sd < 0 or self.target_sd < 0:
            raise BadSpec("noise scales must be non-negative")
        for i in (*self.daily, *self.quarterly):
            if not 0 <= i < self.n_vars:
                raise BadSpec(f"variable index {i} out of range")
        if set(self.daily) & set(self.quarterly):
            raise BadSpec("a variable cannot be both daily and quarterly")


@dataclass
class Simulation:
    dates: np.ndarray  # month-end stamps
    factors: np.ndarray  # (T, r)
    panel: np.ndarray  # (T, N) stationary observed rates
    target: np.ndarray  # (T,)
    spec: DgpSpec
    seed: int
    names: list = field(default_factory=list)


def _streams(seed: int, k: int = 4):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def simulate(seed: int, T: int, spec: DgpSpec | None = None) -> Simulation:
    """Draw T months of factors, observed rates and the target."""
    spec = spec or DgpSpec()
    spec.validate()
    if T < 8:
        raise BadSpec("T too small")
    g_f, g_e, g_t, _ = _streams(seed)
    r, N = spec.n_factors, spec.n_vars
    n = T + spec.burn_in
    phi = np.asarray(spec.factor_ar)
    shocks = g_f.standard_normal((n, r)) * np.sqrt(1 - phi**2)
    F = np.zeros((n, r))
    for t in range(1, n):
        F[t] = phi * F[t - 1] + shocks[t]
    eta = g_t.standard_normal(n) * spec.target_sd
    b = np.asarray(spec.target_loadings)
    pi = np.zeros(n)
    for t in range(1, n):
        pi[t] = spec.target_intercept + spec.target_ar * pi[t - 1] + F[t - 1] @ b + eta[t]
    F, pi = F[spec.burn_in:], pi[spec.burn_in:]
    L = np.asarray(spec.loadings, dtype=float)
    X = F @ L.T + g_e.standard_normal((T, N)) * spec.idio_sd
    first = np.datetime64(spec.start, "M")
    dates = month_end((first + np.arange(T)).astype("datetime64[D]"))
    return Simulation(dates, F, X, pi, spec, seed, spec.names())


def _levels(rates, scale=0.01, base=100.0):
    """Price-like level whose log-difference is ``scale * rates`` (first rate dropped)."""
    return base * np.exp(np.concatenate([[0.0], np.cumsum(scale * rates[1:])]))


def to_series(sim: Simulation) -> dict[str, list[TimeSeries]]:
    """Observed data as raw series grouped by sampling frequency.

    Monthly variables and the target become levels (log + diff recovers
    ``0.01 * rate``); the daily variable is a positive rate-like level
    (log recovers ``0.1 * rate``) observed on weekdays with small noise;
    quarterly variables are levels sampled at quarter-end months.
    """
    spec = sim.spec
    rng = _streams(sim.seed)[3]
    out = {"daily": [], "monthly": [], "quarterly": []}
    for i, name in enumerate(sim.names):
        x = sim.panel[:, i]
        if i in spec.daily:
            months = sim.dates.astype("datetime64[M]")
            days = np.arange(months[0].astype("datetime64[D]"), sim.dates[-1] + 1)
            days = days[np.is_busday(days)]
            idx = np.searchsorted(months, days.astype("datetime64[M]"))
            vals = 10.0 * np.exp(0.1 * x[idx] + 0.005 * rng.standard_normal(days.size))
            out["daily"].append(TimeSeries(name, days, vals, "daily"))
        elif i in spec.quarterly:
            lev = _levels(x)
            q = np.flatnonzero(sim.dates.astype("datetime64[M]").astype(np.int64) % 3 == 2)
            out["quarterly"].append(TimeSeries(name, sim.dates[q], lev[q], "quarterly"))
        else:
            out["monthly"].append(TimeSeries(name, sim.dates, _levels(x), "monthly"))
    out["monthly"].append(TimeSeries("PI", sim.dates, _levels(sim.target), "monthly"))
    return out


CONFIG_TEMPLATE = """\
# Synthetic replication run (generated by `factorcast synth`)
[run]
target = "PI"
factors = {r}
adf_level = 0.10
output_dir = "out"
seed = {seed}

[forecast]
models = ["AR", "1FM", "2FM", "FAVAR1", "FAVAR2"]

[[forecast.windows]]
name = "P1"
start = "{p1}"
end = "{end}"
dm_k = 3

[[forecast.windows]]
name = "P2"
start = "{p2}"
end = "{end}"
dm_k = 3

[[forecast.windows]]
name = "P3"
start = "{p3}"
end = "{end}"
dm_k = 2
"""


def _variable_block(name, file, freq, transform, adf):
    chain = ", ".join(f'"{t}"' for t in transform)
    return (f'\n[[variables]]\nname = "{name}"\nfile = "{file}"\nfrequency = "{freq}"\n'
            f'transform = [{chain}]\nadf = "{adf}"\n')


def write_synthetic(out_dir, seed: int, T: int = 84, spec: DgpSpec | None = None) -> dict:
    """Write daily/monthly/quarterly CSVs, a truth sidecar and a run config.

    Returns the paths written, keyed by role.
    """
    if T < 48:
        raise BadSpec(f"need at least 48 months, got {T}")
    spec = spec or DgpSpec()
    sim = simulate(seed, T, spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    groups = to_series(sim)
    paths = {}
    blocks = []
    for freq, series in groups.items():
        if not series:
            continue
        path = out / f"{freq}.csv"
        write_series_csv(path, series)
        paths[freq] = path
        for s in series:
            transform = ["log"] if freq == "daily" else ["log", "diff"]
            adf = "drift" if freq == "daily" else "trend"
            blocks.append(_variable_block(s.name, path.name, freq, transform, adf))

    truth = {
        "seed": seed,
        "months": T,
        "spec": asdict(spec),
        "variables": sim.names,
        "target": "PI",
        "note": "monthly/quarterly levels: log-diff = 0.01*rate; daily: log = 0.1*rate",
    }
    paths["truth"] = out / "truth.json"
    paths["truth"].write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n")

    months = sim.dates.astype("datetime64[M]")
    end = str(months[-1])
    config = CONFIG_TEMPLATE.format(
        r=spec.n_factors, seed=seed, end=end,
        p1=str(months[-12]), p2=str(months[-8]), p3=str(months[-4]),
    ) + "".join(blocks)
    paths["config"] = out / "config.toml"
    paths["config"].write_text(config)
    return paths
