"""Pipeline report: build, canonical JSON round trip, and CSV exports.

The JSON form is canonical (sorted keys, floats always printed with six
decimals, two-space indent, scalar lists inline), so serialize ->
deserialize -> serialize is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .clustering import ClusterModel, cluster_trends
from .errors import InconsistentClusterIds, IoError
from .ingest import HOURS, DaySeries
from .thresholds import ThresholdPair
from .windows import WindowPlan

SCHEMA_VERSION = 1
FLOAT_DECIMALS = 6


@dataclass(frozen=True)
class ClusterRecord:
    id: int
    member_dates: tuple[str, ...]
    trend: tuple[float, ...]
    centroid: tuple[float, ...]
    thresholds: ThresholdPair
    plan: WindowPlan

    @property
    def size(self) -> int:
        return len(self.member_dates)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "member_dates": list(self.member_dates),
            "size": self.size,
            "trend": list(self.trend),
            "centroid": list(self.centroid),
            "thresholds": self.thresholds.to_dict(),
            "plan": self.plan.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClusterRecord":
        return cls(
            id=int(d["id"]),
            member_dates=tuple(d["member_dates"]),
            trend=tuple(float(v) for v in d["trend"]),
            centroid=tuple(float(v) for v in d["centroid"]),
            thresholds=ThresholdPair.from_dict(d["thresholds"]),
            plan=WindowPlan.from_dict(d["plan"]),
        )


@dataclass(frozen=True)
class Report:
    meta: dict
    clusters: tuple[ClusterRecord, ...]
    diagnostics: dict
    model: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "meta": self.meta,
            "clusters": [c.to_dict() for c in self.clusters],
            "diagnostics": self.diagnostics,
            "model": self.model,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {d.get('schema_version')!r}")
        return cls(
            meta=d["meta"],
            clusters=tuple(ClusterRecord.from_dict(c) for c in d["clusters"]),
            diagnostics=d["diagnostics"],
            model=d.get("model", {}),
        )

    def to_json(self) -> str:
        return dumps_canonical(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def cluster_model(self) -> ClusterModel:
        return ClusterModel.from_dict(self.model)

    def cluster_of(self, date: str) -> int | None:
        for c in self.clusters:
            if date in c.member_dates:
                return c.id
        return None


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite float {x!r}")
    text = f"{x:.{FLOAT_DECIMALS}f}"
    return "0.000000" if text == "-0.000000" else text


def _scalar(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def _is_scalar(value: Any) -> bool:
    return not isinstance(value, (dict, list, tuple))


def _dump(value: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(value)
        for n, key in enumerate(keys):
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r}")
            out.append(f"{inner}{json.dumps(key)}: ")
            _dump(value[key], indent + 1, out)
            out.append(",\n" if n < len(keys) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if all(_is_scalar(v) for v in value):
            out.append("[" + ", ".join(_scalar(v) for v in value) + "]")
            return
        out.append("[\n")
        for n, item in enumerate(value):
            out.append(inner)
            _dump(item, indent + 1, out)
            out.append(",\n" if n < len(value) - 1 else "\n")
        out.append(pad + "]")
    else:
        out.append(_scalar(value))


def dumps_canonical(obj: Any) -> str:
    out: list[str] = []
    _dump(obj, 0, out)
    out.append("\n")
    return "".join(out)


def build_report(
    days: Sequence[DaySeries],
    model: ClusterModel,
    thresholds: Sequence[ThresholdPair],
    plans: Sequence[WindowPlan],
    diagnostics: dict | None = None,
    *,
    trends: np.ndarray | None = None,
    options: dict | None = None,
) -> Report:
    """Collect the fitted pieces into a Report.

    ``options`` is echoed into ``meta.config`` next to the clustering
    configuration (trend method, threshold source, wrap flag, ...).
    """
    k = model.k
    if len(thresholds) != k or len(plans) != k:
        raise InconsistentClusterIds(f"model has {k} clusters, got {len(thresholds)} thresholds and {len(plans)} plans")
    if len(days) != model.assignments.size:
        raise InconsistentClusterIds(f"{len(days)} days but {model.assignments.size} assignments")
    if model.assignments.size and (model.assignments.min() < 0 or model.assignments.max() >= k):
        raise InconsistentClusterIds("assignment outside [0, k)")
    dates = [d.date.isoformat() for d in days]
    if len(set(dates)) != len(dates):
        dup = sorted({x for x in dates if dates.count(x) > 1})
        raise InconsistentClusterIds(f"dates assigned more than once: {dup}")
    if trends is None:
        trends = cluster_trends(days, model)
    trends = np.asarray(trends, dtype=np.float64)
    if trends.shape != (k, HOURS):
        raise InconsistentClusterIds(f"trend array shape {trends.shape} does not match {k} clusters")

    clusters = []
    for c in range(k):
        members = sorted(dates[i] for i in model.members(c))
        clusters.append(
            ClusterRecord(
                id=c,
                member_dates=tuple(members),
                trend=tuple(float(v) for v in trends[c]),
                centroid=tuple(float(v) for v in model.centroids[c]),
                thresholds=thresholds[c],
                plan=plans[c],
            )
        )

    ordered = sorted(dates)
    meta = {
        "tool": "gridwindows",
        "tool_version": __version__,
        "kind": model.kind.value,
        "first_date": ordered[0],
        "last_date": ordered[-1],
        "day_count": len(days),
        "seed": model.seed,
        "config": {**model.config.to_dict(), **(options or {})},
    }
    diag = {
        "inertia": float(model.inertia),
        "iterations": model.iterations_run,
        "inertia_history": [float(x) for x in model.inertia_history],
    }
    diag.update(diagnostics or {})
    return Report(meta=meta, clusters=tuple(clusters), diagnostics=diag, model=model.to_dict())


def save_report(report: Report, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.write_text(report.to_json(), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def load_report(path: str | Path) -> Report:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return Report.from_json(text)


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    try:
        path.write_text(buf.getvalue(), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def emit_plot_data(report: Report, out_dir: str | Path) -> list[Path]:
    """Write ``cluster_<id>.csv`` per cluster: hour, trend, both thresholds, label."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc}") from exc
    paths = []
    for c in report.clusters:
        green = _format_float(c.thresholds.green)
        red = _format_float(c.thresholds.red)
        rows = [
            [str(h), _format_float(c.trend[h]), green, red, c.plan.labels[h].value]
            for h in range(HOURS)
        ]
        path = out_dir / f"cluster_{c.id}.csv"
        _write_csv(path, ["hour", "trend_mw", "green_mw", "red_mw", "label"], rows)
        paths.append(path)
    return paths


def emit_labels_csv(report: Report, path: str | Path) -> Path:
    """Flat ``cluster,hour,label`` export of every cluster's plan."""
    path = Path(path)
    rows = [[str(c.id), str(h), c.plan.labels[h].value] for c in report.clusters for h in range(HOURS)]
    _write_csv(path, ["cluster", "hour", "label"], rows)
    return path


REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "meta", "clusters", "diagnostics", "model"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "meta": {
            "type": "object",
            "required": ["tool_version", "kind", "first_date", "last_date", "day_count", "seed", "config"],
            "properties": {
                "kind": {"enum": ["total", "net"]},
                "day_count": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "first_date": {"type": "string", "format": "date"},
                "last_date": {"type": "string", "format": "date"},
                "config": {"type": "object", "required": ["k", "seed"]},
            },
        },
        "clusters": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "member_dates", "size", "trend", "centroid", "thresholds", "plan"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "member_dates": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
                    "size": {"type": "integer", "minimum": 0},
                    "trend": {"type": "array", "items": {"type": "number"}, "minItems": HOURS, "maxItems": HOURS},
                    "centroid": {"type": "array", "items": {"type": "number"}, "minItems": HOURS, "maxItems": HOURS},
                    "thresholds": {
                        "type": "object",
                        "required": ["green", "red", "centroids", "degenerate"],
                        "properties": {
                            "green": {"type": "number"},
                            "red": {"type": "number"},
                            "centroids": {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 3},
                            "degenerate": {"type": "boolean"},
                        },
                    },
                    "plan": {
                        "type": "object",
                        "required": ["labels", "charge_windows", "v2g_windows"],
                        "properties": {
                            "labels": {
                                "type": "array",
                                "items": {"enum": ["Charge", "Neutral", "V2G"]},
                                "minItems": HOURS,
                                "maxItems": HOURS,
                            },
                            "charge_windows": {"$ref": "#/$defs/windows"},
                            "v2g_windows": {"$ref": "#/$defs/windows"},
                        },
                    },
                },
            },
        },
        "diagnostics": {
            "type": "object",
            "required": ["inertia", "iterations"],
            "properties": {
                "inertia": {"type": "number", "minimum": 0},
                "iterations": {"type": "integer", "minimum": 0},
            },
        },
        "model": {"type": "object", "required": ["schema_version", "centroids", "assignments", "config"]},
    },
    "$defs": {
        "windows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["start", "end", "wraps_midnight"],
                "properties": {
                    "start": {"type": "integer", "minimum": 0, "maximum": HOURS - 1},
                    "end": {"type": "integer", "minimum": 0, "maximum": HOURS},
                    "wraps_midnight": {"type": "boolean"},
                },
            },
        }
    },
}
