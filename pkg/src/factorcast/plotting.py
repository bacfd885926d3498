"""Static figures rendered from the report tables (the CSVs remain the contract)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_META = {"Software": None}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
    return path


def scree(rows, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    comp = [r["component"] for r in rows]
    ax.bar(comp, [100 * r["share"] for r in rows], color="steelblue")
    ax.plot(comp, [100 * r["share"] for r in rows], "ko-", ms=3)
    ax.set_xlabel("component")
    ax.set_ylabel("% of variance")
    return _save(fig, path)


def factor_map(rows, path):
    fig, ax = plt.subplots(figsize=(5, 5))
    t = np.linspace(0, 2 * np.pi, 200)
    ax.plot(np.cos(t), np.sin(t), color="grey", lw=0.8)
    for r in rows:
        x, y = r["corr_f1"], r["corr_f2"] or 0.0
        ax.annotate("", (x, y), (0, 0), arrowprops={"arrowstyle": "->", "color": plt.cm.viridis(r["cos2"])})
        ax.text(x, y, r["variable"], fontsize=8)
    ax.axhline(0, color="grey", lw=0.5)
    ax.axvline(0, color="grey", lw=0.5)
    ax.set_xlim(-1.1, 1.1)
    ax.set_ylim(-1.1, 1.1)
    ax.set_xlabel("F1")
    ax.set_ylabel("F2")
    return _save(fig, path)


def contributions(rows, path):
    factors = sorted({r["factor"] for r in rows})
    fig, axes = plt.subplots(1, len(factors), figsize=(3.2 * len(factors), 3.5), squeeze=False)
    for ax, f in zip(axes[0], factors):
        sub = sorted((r for r in rows if r["factor"] == f), key=lambda r: -r["ctr"])
        ax.bar(range(len(sub)), [100 * r["ctr"] for r in sub], color="steelblue")
        ax.set_xticks(range(len(sub)), [r["variable"] for r in sub], rotation=90, fontsize=7)
        if sub[0]["cutoff"] is not None:
            ax.axhline(100 * sub[0]["cutoff"], color="red", ls="--")
        ax.set_title(f)
    fig.tight_layout()
    return _save(fig, path)


def irf_grid(rows, path):
    names = list(dict.fromkeys(r["response_var"] for r in rows))
    n = len(names)
    fig, axes = plt.subplots(n, n, figsize=(2.2 * n, 2 * n), sharex=True, squeeze=False)
    for i, rv in enumerate(names):
        for j, sv in enumerate(names):
            pts = [(r["horizon"], r["value"]) for r in rows if r["response_var"] == rv and r["shock_var"] == sv]
            h, v = zip(*pts)
            ax = axes[i][j]
            ax.plot(h, v, color="navy")
            ax.axhline(0, color="grey", lw=0.5)
            if i == 0:
                ax.set_title(f"shock {sv}", fontsize=8)
            if j == 0:
                ax.set_ylabel(rv, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def forecasts(rows, path):
    keys = list(dict.fromkeys((r["window"], r["scheme"]) for r in rows))
    fig, axes = plt.subplots(len(keys), 1, figsize=(6, 2.4 * len(keys)), squeeze=False)
    for ax, (w, scheme) in zip(axes[:, 0], keys):
        sub = [r for r in rows if r["window"] == w and r["scheme"] == scheme]
        models = list(dict.fromkeys(r["model"] for r in sub))
        first = [r for r in sub if r["model"] == models[0]]
        ax.plot(range(len(first)), [r["actual"] for r in first], "k-", lw=2, label="actual")
        for m in models:
            ax.plot(range(len(first)), [r["forecast"] for r in sub if r["model"] == m], label=m)
        ax.set_title(f"{w} ({scheme})", fontsize=9)
        ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def render_all(out_dir, tables) -> list[Path]:
    fig_dir = Path(out_dir) / "figures"
    made = [
        scree(tables["scree"], fig_dir / "scree.png"),
        factor_map(tables["factor_map"], fig_dir / "factor_map.png"),
        contributions(tables["contributions"], fig_dir / "contributions.png"),
        irf_grid(tables["irf"], fig_dir / "irf.png"),
    ]
    if tables.get("forecasts"):
        made.append(forecasts(tables["forecasts"], fig_dir / "forecasts.png"))
    return made
