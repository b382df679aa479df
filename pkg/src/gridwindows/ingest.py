"""Hourly CSV ingestion and per-day profile assembly.

Timestamps are read as local calendar time (``YYYY-MM-DDTHH:MM`` or
``YYYY-MM-DD HH:MM``); hour-of-day is taken from the field itself, with no
timezone arithmetic. All quantities are MW.
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import io
import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Mapping, Sequence

import numpy as np

from .errors import DuplicateTimestamp, EmptyInput, MalformedRow, MissingColumn, MixedSeriesKind

HOURS = 24

_TS_RE = re.compile(r"^(\d{4}-\d{2}-\d{2})[T ](\d{2}):(\d{2})$")
_TRUE = {"1", "true", "t", "yes", "y"}
_FALSE = {"", "0", "false", "f", "no", "n"}


class SeriesKind(str, enum.Enum):
    TOTAL = "total"
    NET = "net"


@dataclass(frozen=True)
class CsvSchema:
    """Column mapping for an hourly CSV.

    ``renewables`` lists exactly the columns subtracted for net load; any
    other generation column (nuclear, gas, ...) is ignored. ``dst_flag``
    optionally names a boolean column marking the repeated hour of a
    fall-back day, so that both readings survive the duplicate check.
    """

    timestamp: str = "ts"
    load: str = "load"
    renewables: tuple[str, ...] = ()
    dst_flag: str | None = None

    def columns(self) -> list[str]:
        cols = [self.timestamp, self.load, *self.renewables]
        if self.dst_flag:
            cols.append(self.dst_flag)
        return cols


@dataclass(frozen=True)
class HourlyRecord:
    date: dt.date
    hour: int
    total_load: float
    renewables: Mapping[str, float] = field(default_factory=dict)
    repeated: bool = False

    @property
    def renewable_total(self) -> float:
        return math.fsum(self.renewables.values())

    @property
    def timestamp(self) -> str:
        return f"{self.date.isoformat()}T{self.hour:02d}:00"


@dataclass(frozen=True, eq=False)
class DaySeries:
    date: dt.date
    values: np.ndarray
    kind: SeriesKind
    repaired: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (HOURS,):
            raise ValueError(f"{self.date}: expected {HOURS} hourly values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.date}: non-finite value in profile")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", SeriesKind(self.kind))


@dataclass(frozen=True)
class RepairPolicy:
    """Days missing at most ``max_missing`` hours are linearly interpolated."""

    max_missing: int = 2


@dataclass(frozen=True)
class RejectedDay:
    date: dt.date
    reason: str
    hours_present: int


@dataclass(frozen=True)
class DatasetDiagnostics:
    day_count: int
    first_date: dt.date
    last_date: dt.date
    gaps: list[dt.date]
    repaired_count: int
    kind: SeriesKind
    hourly_min: list[float]
    hourly_max: list[float]
    hourly_mean: list[float]

    def to_dict(self) -> dict:
        return {
            "day_count": self.day_count,
            "first_date": self.first_date.isoformat(),
            "last_date": self.last_date.isoformat(),
            "gaps": [d.isoformat() for d in self.gaps],
            "repaired_count": self.repaired_count,
            "kind": self.kind.value,
            "hourly_min": list(self.hourly_min),
            "hourly_max": list(self.hourly_max),
            "hourly_mean": list(self.hourly_mean),
        }


def _parse_timestamp(text: str, row: int) -> tuple[dt.date, int]:
    m = _TS_RE.match(text.strip())
    if m is None:
        raise MalformedRow(row, f"unparsable timestamp {text!r}")
    try:
        date = dt.date.fromisoformat(m.group(1))
    except ValueError:
        raise MalformedRow(row, f"invalid date in {text!r}") from None
    hour, minute = int(m.group(2)), int(m.group(3))
    if hour >= HOURS:
        raise MalformedRow(row, f"hour out of range in {text!r}")
    if minute != 0:
        raise MalformedRow(row, f"sub-hourly timestamp {text!r} not supported")
    return date, hour


def _parse_mw(text: str, column: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(row, f"column {column!r}: unparsable number {text!r}") from None
    if not math.isfinite(value):
        raise MalformedRow(row, f"column {column!r}: non-finite value {text!r}")
    if value < 0:
        raise MalformedRow(row, f"column {column!r}: negative value {text!r}")
    return value


def _parse_flag(text: str, column: str, row: int) -> bool:
    t = text.strip().lower()
    if t in _TRUE:
        return True
    if t in _FALSE:
        return False
    raise MalformedRow(row, f"column {column!r}: unparsable flag {text!r}")


def parse_hourly_csv(source: BinaryIO | bytes, schema: CsvSchema) -> list[HourlyRecord]:
    """Parse UTF-8 CSV bytes into hourly records sorted by timestamp.

    Row numbers in errors are 1-based file line numbers (the header is
    line 1).
    """
    raw = bytes(source) if isinstance(source, (bytes, bytearray)) else source.read()
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedRow(0, f"input is not UTF-8: {exc}") from None
    reader = csv.DictReader(io.StringIO(text, newline=""))
    header = reader.fieldnames or []
    for col in schema.columns():
        if col not in header:
            raise MissingColumn(col)

    records: dict[tuple, tuple[int, HourlyRecord]] = {}
    for row_no, row in enumerate(reader, start=2):
        if None in row or any(row.get(c) is None for c in schema.columns()):
            raise MalformedRow(row_no, "wrong number of fields")
        date, hour = _parse_timestamp(row[schema.timestamp], row_no)
        load = _parse_mw(row[schema.load], schema.load, row_no)
        ren = {c: _parse_mw(row[c], c, row_no) for c in schema.renewables}
        repeated = _parse_flag(row[schema.dst_flag], schema.dst_flag, row_no) if schema.dst_flag else False
        rec = HourlyRecord(date, hour, load, ren, repeated)
        key = (date, hour, repeated)
        if key in records:
            raise DuplicateTimestamp(row_no, row[schema.timestamp].strip())
        records[key] = (row_no, rec)
    return [records[key][1] for key in sorted(records)]


def read_hourly_csv(path: str | Path, schema: CsvSchema) -> list[HourlyRecord]:
    with open(path, "rb") as fh:
        return parse_hourly_csv(fh, schema)


def _record_value(rec: HourlyRecord, kind: SeriesKind) -> float:
    if kind is SeriesKind.NET:
        return rec.total_load - rec.renewable_total
    return rec.total_load


def assemble_days(
    records: Sequence[HourlyRecord],
    kind: SeriesKind | str = SeriesKind.TOTAL,
    repair: RepairPolicy = RepairPolicy(),
) -> tuple[list[DaySeries], list[RejectedDay]]:
    """Group hourly records into 24-value days.

    Returns ``(days, rejects)``. A repeated fall-back hour is averaged with
    its twin; up to ``repair.max_missing`` absent hours are filled by linear
    interpolation between present neighbours (clamped at the day edges).
    """
    kind = SeriesKind(kind)
    if not records:
        raise EmptyInput("no hourly records")

    by_date: dict[dt.date, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for rec in records:
        by_date[rec.date][rec.hour].append(_record_value(rec, kind))

    days: list[DaySeries] = []
    rejects: list[RejectedDay] = []
    for date in sorted(by_date):
        hours = by_date[date]
        present = sorted(hours)
        missing = HOURS - len(present)
        if missing > repair.max_missing:
            rejects.append(RejectedDay(date, f"{missing} of {HOURS} hours missing", len(present)))
            continue
        known = np.array([math.fsum(hours[h]) / len(hours[h]) for h in present])
        if missing:
            values = np.interp(np.arange(HOURS), np.array(present, dtype=float), known)
            values[present] = known
        else:
            values = known
        days.append(DaySeries(date, values, kind, repaired=missing > 0))
    return days, rejects


def validate_dataset(days: Iterable[DaySeries]) -> DatasetDiagnostics:
    days = sorted(days, key=lambda d: d.date)
    if not days:
        raise EmptyInput("no days to validate")
    kinds = {d.kind for d in days}
    if len(kinds) != 1:
        raise MixedSeriesKind("days of mixed kind")
    have = {d.date for d in days}
    first, last = days[0].date, days[-1].date
    gaps = [
        first + dt.timedelta(days=i)
        for i in range((last - first).days + 1)
        if first + dt.timedelta(days=i) not in have
    ]
    mat = np.vstack([d.values for d in days])
    return DatasetDiagnostics(
        day_count=len(days),
        first_date=first,
        last_date=last,
        gaps=gaps,
        repaired_count=sum(d.repaired for d in days),
        kind=kinds.pop(),
        hourly_min=mat.min(axis=0).tolist(),
        hourly_max=mat.max(axis=0).tolist(),
        hourly_mean=mat.mean(axis=0).tolist(),
    )
