"""Deterministic machine-readable outputs: JSON reports and CSV profiles.

Reports contain no timestamps and are serialized with sorted keys, so a
fixed configuration and seed reproduce byte-identical files.  Every report
carries the hash of the configuration that produced it.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .grid import RadialField


def _clean(obj):
    """JSON-safe copy: NaN/inf become strings (json floats must be finite)."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        try:
            return _clean(obj.item())
        except (AttributeError, ValueError):
            return obj
    return obj


def report_bytes(payload: dict) -> bytes:
    return (json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n").encode()


def write_report(out_dir: str | Path, payload: dict, name: str = "report.json") -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_bytes(report_bytes(payload))
    return path


def write_field_csv(path: str | Path, field: RadialField, value_name: str = "value") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"r,{value_name}"]
    for r, v in zip(field.grid.r, field.values):
        lines.append(f"{r!r},{v!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_rows_csv(path: str | Path, header: str, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [header]
    for row in rows:
        lines.append(",".join(repr(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_ray_csv(path: str | Path, t_list, j_list) -> Path:
    return write_rows_csv(path, "t,J", zip(t_list, j_list))


def write_instanton_csv(path: str | Path, report) -> Path:
    return write_rows_csv(path, "epsilon,X_eps,supJ,I_eps,annulus", report.rows())
