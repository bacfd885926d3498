"""Run configuration: a TOML file parsed into frozen dataclasses.

Schema (paths are relative to the config file)::

    [run]
    target = "PI"            # a declared variable, excluded from the panel
    factors = 4              # r, number of factors used by every stage
    adf_level = 0.10         # 0.01, 0.05 or 0.10
    diff_adf = "drift"       # ADF specification for differenced series
    output_dir = "out"
    seed = 0                 # master seed, recorded in the manifest
    factor_scores = "frozen" # or "full"
    sig_level = 0.10         # correlation significance for contribution cutoffs
    plots = false

    [favar]
    lags = 1
    irf_horizon = 12
    irf_kind = "generalized" # or "orthogonalized"

    [forecast]
    enabled = true
    models = ["AR", "1FM", "2FM", "FAVAR1", "FAVAR2"]
    static_scheme = "fixed"  # or "expanding"

    [[forecast.windows]]
    name = "P1"
    start = "2019-01"
    end = "2019-12"
    dm_k = 3                 # or "auto"

    [[variables]]
    name = "IPCGL"
    file = "monthly.csv"
    column = "IPCGL"         # defaults to name
    frequency = "monthly"    # optional, inferred from dates
    transform = ["log", "diff"]
    adf = "trend"            # or "drift"
    screen = true            # ADF screen may difference once more
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .errors import ConfigError
from .series import FREQUENCIES, TRANSFORMS
from .stationarity import LEVELS, SPECS

_MODEL = re.compile(r"^(?:AR|(\d+)FM|FAVAR(\d+))$")


@dataclass(frozen=True)
class VariableSource:
    name: str
    file: Path
    column: str
    frequency: str | None = None
    transform: tuple = ()
    adf: str = "trend"
    screen: bool = True


@dataclass(frozen=True)
class Window:
    name: str
    start: np.datetime64  # month
    end: np.datetime64  # month
    dm_k: int | str = "auto"


@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str  # "ar", "static" or "dynamic"
    factors: int

    @classmethod
    def parse(cls, name: str) -> "ModelSpec":
        m = _MODEL.match(name)
        if not m:
            raise ConfigError(f"unknown model {name!r}; use AR, <k>FM or FAVAR<k>")
        if m.group(1):
            return cls(name, "static", int(m.group(1)))
        if m.group(2):
            return cls(name, "dynamic", int(m.group(2)))
        return cls(name, "ar", 0)


@dataclass(frozen=True)
class PipelineConfig:
    variables: tuple
    target: str
    factors: int
    adf_level: float = 0.10
    diff_adf: str = "drift"
    output_dir: Path = Path("out")
    seed: int = 0
    factor_scores: str = "frozen"
    sig_level: float = 0.10
    plots: bool = False
    var_lags: int = 1
    irf_horizon: int = 12
    irf_kind: str = "generalized"
    forecast: bool = True
    models: tuple = ()
    static_scheme: str = "fixed"
    windows: tuple = ()
    source_hash: str = field(default="", compare=False)

    @property
    def predictors(self) -> list[VariableSource]:
        return [v for v in self.variables if v.name != self.target]

    def variable(self, name: str) -> VariableSource:
        for v in self.variables:
            if v.name == name:
                return v
        raise ConfigError(f"unknown variable {name!r}")


def _month(value, what) -> np.datetime64:
    try:
        return np.datetime64(str(value)[:7], "M")
    except ValueError as exc:
        raise ConfigError(f"{what}: cannot parse month {value!r}") from exc


def _choice(value, allowed, what):
    if value not in allowed:
        raise ConfigError(f"{what} must be one of {tuple(allowed)}, got {value!r}")
    return value


def parse_config(data: dict, base_dir: Path = Path(".")) -> PipelineConfig:
    run = data.get("run", {})
    favar = data.get("favar", {})
    fc = data.get("forecast", {})
    base_dir = Path(base_dir)

    variables = []
    seen = set()
    for i, v in enumerate(data.get("variables", [])):
        if "name" not in v or "file" not in v:
            raise ConfigError(f"variables[{i}] needs 'name' and 'file'")
        name = str(v["name"])
        if name in seen:
            raise ConfigError(f"variable {name!r} declared twice")
        seen.add(name)
        freq = v.get("frequency")
        if freq is not None:
            _choice(freq, FREQUENCIES, f"{name}.frequency")
        chain = tuple(v.get("transform", ()))
        for step in chain:
            _choice(step, TRANSFORMS, f"{name}.transform")
        variables.append(VariableSource(
            name=name,
            file=(base_dir / v["file"]).resolve(),
            column=str(v.get("column", name)),
            frequency=freq,
            transform=chain,
            adf=_choice(v.get("adf", "trend"), SPECS, f"{name}.adf"),
            screen=bool(v.get("screen", True)),
        ))
    if not variables:
        raise ConfigError("no variables declared")

    if "target" not in run:
        raise ConfigError("run.target is required")
    target = str(run["target"])
    if target not in seen:
        raise ConfigError(f"unknown variable {target!r} named as target")
    n_pred = len(variables) - 1
    r = int(run.get("factors", 1))
    if not 1 <= r <= n_pred:
        raise ConfigError(f"run.factors must be in 1..{n_pred}, got {r}")

    models = tuple(ModelSpec.parse(m) for m in fc.get("models", ["AR", "1FM", "2FM", "FAVAR1", "FAVAR2"]))
    for m in models:
        if m.factors > r:
            raise ConfigError(f"model {m.name} uses {m.factors} factors but run.factors = {r}")

    windows = []
    for i, w in enumerate(fc.get("windows", [])):
        name = str(w.get("name", f"W{i + 1}"))
        if "start" not in w or "end" not in w:
            raise ConfigError(f"window {name!r} needs start and end")
        start, end = _month(w["start"], name), _month(w["end"], name)
        if end < start:
            raise ConfigError(f"window {name!r} ends before it starts")
        k = w.get("dm_k", "auto")
        if k != "auto" and (not isinstance(k, int) or k < 1):
            raise ConfigError(f"window {name!r}: dm_k must be a positive integer or 'auto'")
        windows.append(Window(name, start, end, k))

    level = float(run.get("adf_level", 0.10))
    _choice(level, LEVELS, "run.adf_level")
    return PipelineConfig(
        variables=tuple(variables),
        target=target,
        factors=r,
        adf_level=level,
        diff_adf=_choice(run.get("diff_adf", "drift"), SPECS, "run.diff_adf"),
        output_dir=(base_dir / run.get("output_dir", "out")).resolve(),
        seed=int(run.get("seed", 0)),
        factor_scores=_choice(run.get("factor_scores", "frozen"), ("frozen", "full"), "run.factor_scores"),
        sig_level=float(run.get("sig_level", 0.10)),
        plots=bool(run.get("plots", False)),
        var_lags=int(favar.get("lags", 1)),
        irf_horizon=int(favar.get("irf_horizon", 12)),
        irf_kind=_choice(favar.get("irf_kind", "generalized"), ("generalized", "orthogonalized"), "favar.irf_kind"),
        forecast=bool(fc.get("enabled", True)),
        models=models,
        static_scheme=_choice(fc.get("static_scheme", "fixed"), ("fixed", "expanding"), "forecast.static_scheme"),
        windows=tuple(windows),
    )


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
        data = tomllib.loads(raw.decode("utf-8"))
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    cfg = parse_config(data, path.parent)
    object.__setattr__(cfg, "source_hash", hashlib.sha256(raw).hexdigest())
    return cfg
