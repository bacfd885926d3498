"""Report writers: every table goes out as UTF-8 CSV and JSON, and the run
closes with a manifest of SHA-256 content hashes."""
from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, "item"):  # numpy scalars
        return _clean(value.item())
    return value


class ReportWriter:
    def __init__(self, out_dir):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def register(self, p: Path) -> Path:
        self.files.append(p)
        return p

    def table(self, stem: str, rows: list[dict], columns: list[str] | None = None, json_too: bool = True):
        rows = [{k: _clean(v) for k, v in row.items()} for row in rows]
        columns = columns or (list(rows[0]) if rows else [])
        p = self.path(f"{stem}.csv")
        with p.open("w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({c: ("" if row.get(c) is None else row.get(c)) for c in columns})
        self.register(p)
        if json_too:
            self.json(f"{stem}.json", rows)

    def json(self, name: str, payload):
        p = self.path(name)
        p.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_clean) + "\n", encoding="utf-8")
        self.register(p)

    def manifest(self, extra: dict | None = None) -> Path:
        entries = {}
        for p in sorted(set(self.files)):
            entries[p.relative_to(self.out_dir).as_posix()] = sha256(p)
        payload = {"files": entries, **(extra or {})}
        p = self.out_dir / "manifest.json"
        p.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return p


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
