"""Hour labels and contiguous charge / V2G windows per cluster trend."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import ClusterModel, assign_day
from .dtw import DtwConfig
from .ingest import HOURS, DaySeries
from .thresholds import ThresholdPair


class HourLabel(str, enum.Enum):
    CHARGE = "Charge"
    NEUTRAL = "Neutral"
    V2G = "V2G"


@dataclass(frozen=True)
class Window:
    """Half-open hour interval ``[start, end)``.

    A window that wraps midnight has ``end <= start`` and covers
    ``start..23`` followed by ``0..end-1``.
    """

    start: int
    end: int
    wraps_midnight: bool = False

    def hours(self) -> list[int]:
        if self.wraps_midnight:
            return list(range(self.start, HOURS)) + list(range(0, self.end))
        return list(range(self.start, self.end))

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "wraps_midnight": self.wraps_midnight}

    @classmethod
    def from_dict(cls, d: dict) -> "Window":
        return cls(int(d["start"]), int(d["end"]), bool(d["wraps_midnight"]))


@dataclass(frozen=True)
class WindowPlan:
    labels: tuple[HourLabel, ...]
    charge_windows: tuple[Window, ...]
    v2g_windows: tuple[Window, ...]

    def paint(self) -> list[HourLabel]:
        """Rebuild 24 labels from the windows alone."""
        out = [HourLabel.NEUTRAL] * HOURS
        for label, windows in ((HourLabel.CHARGE, self.charge_windows), (HourLabel.V2G, self.v2g_windows)):
            for w in windows:
                for h in w.hours():
                    out[h] = label
        return out

    def to_dict(self) -> dict:
        return {
            "labels": [lab.value for lab in self.labels],
            "charge_windows": [w.to_dict() for w in self.charge_windows],
            "v2g_windows": [w.to_dict() for w in self.v2g_windows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WindowPlan":
        return cls(
            tuple(HourLabel(x) for x in d["labels"]),
            tuple(Window.from_dict(w) for w in d["charge_windows"]),
            tuple(Window.from_dict(w) for w in d["v2g_windows"]),
        )


def label_hours(trend: Sequence[float], thr: ThresholdPair) -> list[HourLabel]:
    """Charge strictly below green, V2G strictly above red, Neutral otherwise.

    A degenerate threshold pair labels every hour Neutral.
    """
    trend = np.asarray(trend, dtype=np.float64)
    if trend.shape != (HOURS,):
        raise ValueError(f"expected {HOURS} trend values, got shape {trend.shape}")
    if thr.degenerate:
        return [HourLabel.NEUTRAL] * HOURS
    labels = []
    for v in trend:
        if v < thr.green:
            labels.append(HourLabel.CHARGE)
        elif v > thr.red:
            labels.append(HourLabel.V2G)
        else:
            labels.append(HourLabel.NEUTRAL)
    return labels


def _runs(labels: Sequence[HourLabel]) -> list[tuple[HourLabel, int, int]]:
    runs = []
    start = 0
    for h in range(1, len(labels) + 1):
        if h == len(labels) or labels[h] != labels[start]:
            runs.append((labels[start], start, h))
            start = h
    return runs


def extract_windows(labels: Sequence[HourLabel], wrap: bool = True) -> WindowPlan:
    """Collapse maximal runs of Charge / V2G hours into windows.

    With ``wrap`` a run ending at hour 23 is joined with a same-label run
    starting at hour 0.
    """
    labels = tuple(HourLabel(x) for x in labels)
    if len(labels) != HOURS:
        raise ValueError(f"expected {HOURS} labels, got {len(labels)}")
    runs = _runs(labels)
    windows: dict[HourLabel, list[Window]] = {HourLabel.CHARGE: [], HourLabel.V2G: []}
    joined = wrap and len(runs) > 1 and runs[0][0] == runs[-1][0] and runs[0][0] != HourLabel.NEUTRAL
    if joined:
        label, start, _ = runs[-1]
        windows[label].append(Window(start, runs[0][2], wraps_midnight=True))
        runs = runs[1:-1]
    for label, start, end in runs:
        if label != HourLabel.NEUTRAL:
            windows[label].append(Window(start, end))
    for ws in windows.values():
        ws.sort(key=lambda w: w.start)
    return WindowPlan(labels, tuple(windows[HourLabel.CHARGE]), tuple(windows[HourLabel.V2G]))


def plan_for_day(
    day: DaySeries, model: ClusterModel, plans: Sequence[WindowPlan], dtw_cfg: DtwConfig | None = None
) -> tuple[int, WindowPlan]:
    """Classify ``day`` onto ``model`` and return that cluster's plan."""
    cid = assign_day(day, model, dtw_cfg)
    return cid, plans[cid]
