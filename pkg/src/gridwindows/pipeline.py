"""End-to-end fit: cluster, trends, thresholds, windows, report."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .clustering import TREND_METHODS, ClusteringConfig, cluster_days, cluster_trends, sweep_k
from .errors import ConfigError
from .ingest import DaySeries
from .report import Report, build_report, emit_labels_csv, emit_plot_data, save_report
from .thresholds import derive_thresholds
from .windows import extract_windows, label_hours

THRESHOLD_SOURCES = ("trend", "members")


@dataclass(frozen=True)
class PipelineOptions:
    trend: str = "dba"
    threshold_source: str = "trend"
    wrap: bool = True

    def __post_init__(self):
        if self.trend not in TREND_METHODS:
            raise ConfigError(f"trend must be one of {TREND_METHODS}, got {self.trend!r}")
        if self.threshold_source not in THRESHOLD_SOURCES:
            raise ConfigError(f"threshold source must be one of {THRESHOLD_SOURCES}, got {self.threshold_source!r}")

    def to_dict(self) -> dict:
        return {"trend": self.trend, "threshold_source": self.threshold_source, "wrap": self.wrap}


def fit_pipeline(
    days: Sequence[DaySeries],
    cfg: ClusteringConfig,
    options: PipelineOptions = PipelineOptions(),
    *,
    sweep: Sequence[int] | None = None,
    diagnostics: dict | None = None,
) -> Report:
    model = cluster_days(days, cfg)
    trends = cluster_trends(days, model, options.trend)
    raw = np.vstack([d.values for d in days])
    thresholds, plans = [], []
    for c in range(model.k):
        source = raw[model.members(c)].ravel() if options.threshold_source == "members" else trends[c]
        thr = derive_thresholds(source)
        thresholds.append(thr)
        plans.append(extract_windows(label_hours(trends[c], thr), wrap=options.wrap))
    diag = dict(diagnostics or {})
    if sweep:
        diag["sweep"] = [{"k": k, "inertia": inertia} for k, inertia in sweep_k(days, sweep, cfg)]
    return build_report(days, model, thresholds, plans, diag, trends=trends, options=options.to_dict())


def write_outputs(report: Report, out_dir: str | Path) -> list[Path]:
    """``report.json``, one ``cluster_<id>.csv`` per cluster, and ``labels.csv``."""
    out_dir = Path(out_dir)
    plots = emit_plot_data(report, out_dir)
    return [save_report(report, out_dir / "report.json"), *plots, emit_labels_csv(report, out_dir / "labels.csv")]
