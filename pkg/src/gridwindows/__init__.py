"""DTW clustering of daily load profiles into EV charging and V2G hour windows."""

__version__ = "0.1.0"

from .dtw import DtwConfig, dtw_distance, dtw_path
from .ingest import CsvSchema, DaySeries, RepairPolicy, SeriesKind, assemble_days, parse_hourly_csv, read_hourly_csv, validate_dataset
from .clustering import ClusteringConfig, ClusterModel, assign_day, cluster_days, dba_mean, sweep_k
from .thresholds import ThresholdPair, derive_thresholds, kmeans_1d_exact
from .windows import HourLabel, Window, WindowPlan, extract_windows, label_hours, plan_for_day
from .report import Report, build_report, emit_plot_data, load_report, save_report
from .pipeline import PipelineOptions, fit_pipeline

__all__ = [
    "ClusterModel",
    "ClusteringConfig",
    "CsvSchema",
    "DaySeries",
    "DtwConfig",
    "HourLabel",
    "PipelineOptions",
    "RepairPolicy",
    "Report",
    "SeriesKind",
    "ThresholdPair",
    "Window",
    "WindowPlan",
    "assemble_days",
    "assign_day",
    "build_report",
    "cluster_days",
    "dba_mean",
    "derive_thresholds",
    "dtw_distance",
    "dtw_path",
    "emit_plot_data",
    "extract_windows",
    "fit_pipeline",
    "kmeans_1d_exact",
    "label_hours",
    "load_report",
    "parse_hourly_csv",
    "plan_for_day",
    "read_hourly_csv",
    "save_report",
    "sweep_k",
    "validate_dataset",
]
