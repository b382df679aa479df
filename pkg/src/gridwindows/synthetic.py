"""Synthetic daily load shapes with known family labels."""

from __future__ import annotations

import csv
import datetime as dt
import io

import numpy as np

from .ingest import HOURS, CsvSchema, DaySeries, HourlyRecord, SeriesKind

FAMILIES = ("flat", "evening", "dual")

_H = np.arange(HOURS, dtype=np.float64)


def _bump(center: float, width: float) -> np.ndarray:
    return np.exp(-0.5 * ((_H - center) / width) ** 2)


def family_shape(name: str, base: float = 40.0) -> np.ndarray:
    """Noise-free 24-hour profile in MW."""
    if name == "flat":
        return np.full(HOURS, base)
    if name == "evening":
        return base + 30.0 * _bump(19.0, 2.0)
    if name == "dual":
        return base + 20.0 * _bump(8.0, 1.5) + 25.0 * _bump(19.0, 1.5)
    if name == "duck":
        return base + 10.0 * _bump(8.0, 2.0) - 15.0 * _bump(13.0, 2.5) + 25.0 * _bump(20.0, 1.5)
    raise ValueError(f"unknown family {name!r}")


def synthetic_days(
    per_family: int = 40,
    noise: float = 0.02,
    seed: int = 0,
    families: tuple[str, ...] = FAMILIES,
    start: dt.date = dt.date(2022, 1, 1),
    kind: SeriesKind = SeriesKind.TOTAL,
) -> tuple[list[DaySeries], list[str]]:
    """Days drawn from fixed family shapes with multiplicative uniform noise.

    Families are shuffled over consecutive dates. Returns the days and their
    generating family names.
    """
    rng = np.random.default_rng(seed)
    labels = [f for f in families for _ in range(per_family)]
    labels = [labels[i] for i in rng.permutation(len(labels))]
    days = []
    for i, fam in enumerate(labels):
        factor = 1.0 + rng.uniform(-noise, noise, HOURS)
        days.append(DaySeries(start + dt.timedelta(days=i), family_shape(fam) * factor, kind))
    return days, labels


def synthetic_year(seed: int = 0, year: int = 2022, noise: float = 0.03) -> list[DaySeries]:
    """365-ish days mixing four shapes with a seasonal level and amplitude swing."""
    rng = np.random.default_rng(seed)
    names = ("flat", "evening", "dual", "duck")
    first = dt.date(year, 1, 1)
    n = (dt.date(year + 1, 1, 1) - first).days
    days = []
    for i in range(n):
        season = np.cos(2 * np.pi * (i - 200) / n)
        base = 40_000.0 + 8_000.0 * season
        shape = family_shape(names[rng.integers(len(names))], base=0.0)
        profile = base + shape * 400.0 * (1.0 + 0.5 * season)
        profile = profile * (1.0 + rng.uniform(-noise, noise, HOURS))
        days.append(DaySeries(first + dt.timedelta(days=i), profile, SeriesKind.TOTAL))
    return days


def solar_shape(peak: float) -> np.ndarray:
    return peak * np.clip(np.sin(np.pi * (_H - 6.0) / 13.0), 0.0, None)


def days_to_records(days: list[DaySeries], wind: float = 5.0, solar_peak: float = 8.0) -> list[HourlyRecord]:
    """Hourly records whose total load reproduces ``days``.

    Wind is a constant level and solar a midday arch, both
    clipped so that neither exceeds the load.
    """
    out = []
    sun = solar_shape(solar_peak)
    for d in days:
        for h in range(HOURS):
            load = float(d.values[h])
            w = min(wind, load)
            s = min(float(sun[h]), load - w)
            out.append(HourlyRecord(d.date, h, load, {"wind": w, "solar": s}))
    return out


def records_to_csv(records: list[HourlyRecord], schema: CsvSchema = CsvSchema(renewables=("wind", "solar"))) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema.columns())
    for r in records:
        row = [r.timestamp, f"{r.total_load:.6f}"]
        row += [f"{r.renewables.get(c, 0.0):.6f}" for c in schema.renewables]
        if schema.dst_flag:
            row.append("1" if r.repeated else "0")
        writer.writerow(row)
    return buf.getvalue()
