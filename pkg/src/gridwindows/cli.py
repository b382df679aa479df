"""Command-line front end: ``validate``, ``fit``, ``sweep``, ``plan``.

stdout carries JSON or CSV only; messages go to stderr. Exit codes: 0 ok,
1 input error, 2 configuration or data-size error, 3 lookup miss.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .clustering import NORMALIZATIONS, TREND_METHODS, ClusteringConfig, sweep_k
from .dtw import DtwConfig
from .errors import ConfigError, GridWindowsError, InputError
from .ingest import HOURS, CsvSchema, DaySeries, SeriesKind, assemble_days, read_hourly_csv, validate_dataset
from .pipeline import THRESHOLD_SOURCES, PipelineOptions, fit_pipeline, write_outputs
from .report import dumps_canonical, load_report
from .windows import plan_for_day

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_LOOKUP = 0, 1, 2, 3


class LookupMiss(GridWindowsError):
    pass


def _err(msg: str) -> None:
    print(f"gridwindows: {msg}", file=sys.stderr)


def _add_schema_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", type=Path, help="hourly CSV file")
    p.add_argument("--col-ts", default="ts", help="timestamp column (default: ts)")
    p.add_argument("--col-load", default="load", help="total load column in MW (default: load)")
    p.add_argument(
        "--col-renewable",
        action="append",
        default=[],
        metavar="NAME",
        help="renewable generation column subtracted for net load; repeatable",
    )
    p.add_argument("--col-dst", default=None, metavar="NAME", help="boolean column marking the repeated DST hour")
    p.add_argument("--kind", choices=[k.value for k in SeriesKind], default="total")


def _add_cluster_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--band", type=int, default=None, metavar="R", help="Sakoe-Chiba band radius in hours")
    p.add_argument("--normalize", choices=NORMALIZATIONS, default="none")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--dba-iter", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridwindows", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and check an hourly CSV; diagnostics JSON on stdout")
    _add_schema_flags(p)

    p = sub.add_parser("fit", help="cluster days and write report.json plus plot CSVs")
    _add_schema_flags(p)
    _add_cluster_flags(p)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--trend", choices=TREND_METHODS, default="dba")
    p.add_argument("--threshold-source", choices=THRESHOLD_SOURCES, default="trend")
    p.add_argument("--no-wrap", action="store_true", help="do not merge windows across midnight")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")

    p = sub.add_parser("sweep", help="inertia for a range of k; CSV on stdout")
    _add_schema_flags(p)
    _add_cluster_flags(p)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)

    p = sub.add_parser("plan", help="cluster and windows for a date or a 24-value profile")
    p.add_argument("report", type=Path)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--date", help="YYYY-MM-DD of a day inside the report")
    which.add_argument("--profile", type=Path, help="CSV holding one 24-value profile")
    return parser


def _schema(args) -> CsvSchema:
    return CsvSchema(args.col_ts, args.col_load, tuple(args.col_renewable), args.col_dst)


def _cluster_config(args, k: int) -> ClusteringConfig:
    return ClusteringConfig(
        k=k,
        max_iter=args.max_iter,
        dba_iter=args.dba_iter,
        tol=args.tol,
        seed=args.seed,
        dtw=DtwConfig(args.band),
        normalize=args.normalize,
    )


def _load_days(args) -> tuple[list[DaySeries], list[dict]]:
    kind = SeriesKind(args.kind)
    if kind is SeriesKind.NET and not args.col_renewable:
        _err("warning: --kind net without --col-renewable; net load equals total load")
    records = read_hourly_csv(args.input, _schema(args))
    days, rejects = assemble_days(records, kind)
    rejected = [{"date": r.date.isoformat(), "reason": r.reason, "hours_present": r.hours_present} for r in rejects]
    for r in rejected:
        _err(f"rejected {r['date']}: {r['reason']}")
    return days, rejected


def cmd_validate(args) -> int:
    days, rejected = _load_days(args)
    out = {"rejects": rejected}
    if days:
        out["diagnostics"] = validate_dataset(days).to_dict()
    sys.stdout.write(dumps_canonical(out))
    return EXIT_OK if not rejected else EXIT_INPUT


def cmd_fit(args) -> int:
    cfg = _cluster_config(args, args.k)
    options = PipelineOptions(args.trend, args.threshold_source, not args.no_wrap)
    days, rejected = _load_days(args)
    if not days:
        raise InputError("no complete days in input")
    dataset = validate_dataset(days).to_dict()
    report = fit_pipeline(days, cfg, options, diagnostics={"dataset": dataset, "rejects": rejected})
    paths = write_outputs(report, args.out)
    _err(f"wrote {len(paths)} files to {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.k_min < 1 or args.k_min > args.k_max:
        raise ConfigError(f"need 1 <= --k-min <= --k-max, got {args.k_min}..{args.k_max}")
    cfg = _cluster_config(args, args.k_min)
    days, _ = _load_days(args)
    rows = sweep_k(days, list(range(args.k_min, args.k_max + 1)), cfg)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "inertia"])
    writer.writerows([k, f"{inertia:.6f}"] for k, inertia in rows)
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def parse_profile(text: str) -> list[float]:
    """24 MW values from CSV text.

    Accepts one row of 24 values, or 24 rows of ``value`` or
    ``hour,value``; a leading non-numeric header row is skipped.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]

    def numeric(row):
        try:
            return [float(c) for c in row]
        except ValueError:
            return None

    if rows and numeric(rows[0]) is None:
        rows = rows[1:]
    parsed = [numeric(r) for r in rows]
    if any(p is None for p in parsed):
        raise InputError("profile contains non-numeric cells")
    if len(parsed) == 1:
        values = parsed[0]
    elif all(len(p) == 1 for p in parsed):
        values = [p[0] for p in parsed]
    elif all(len(p) == 2 for p in parsed):
        values = [p[1] for p in parsed]
    else:
        raise InputError("profile must be one row or one/two columns")
    if len(values) != HOURS:
        raise InputError(f"profile has {len(values)} values, expected {HOURS}")
    return values


def cmd_plan(args) -> int:
    report = load_report(args.report)
    if args.date:
        cid = report.cluster_of(args.date)
        if cid is None:
            raise LookupMiss(f"date {args.date} is not in the report")
        out = {"source": "date", "date": args.date, "cluster": cid}
    else:
        try:
            text = args.profile.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read profile: {exc}") from exc
        try:
            day = DaySeries(dt.date.min, parse_profile(text), SeriesKind(report.meta["kind"]))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        plans = [c.plan for c in report.clusters]
        cid, _ = plan_for_day(day, report.cluster_model(), plans)
        out = {"source": "profile", "cluster": cid}
    out["plan"] = report.clusters[cid].plan.to_dict()
    out["thresholds"] = report.clusters[cid].thresholds.to_dict()
    sys.stdout.write(dumps_canonical(out))
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "fit": cmd_fit, "sweep": cmd_sweep, "plan": cmd_plan}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except LookupMiss as exc:
        _err(str(exc))
        return EXIT_LOOKUP
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except (InputError, OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
