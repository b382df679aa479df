"""Green (charge) and red (V2G) levels from exact one-dimensional k-means."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyValues

BANDS = 3


@dataclass(frozen=True)
class KMeans1D:
    """Globally optimal 1-D clustering.

    ``labels[i]`` is the cluster of ``values[i]`` in input order; clusters
    are numbered by ascending centroid.
    """

    centroids: tuple[float, ...]
    labels: np.ndarray
    cost: float
    degenerate: bool


@dataclass(frozen=True)
class ThresholdPair:
    green: float
    red: float
    centroids: tuple[float, ...]
    degenerate: bool = False

    def __post_init__(self):
        if self.green > self.red:
            raise ValueError(f"green {self.green} above red {self.red}")

    def to_dict(self) -> dict:
        return {
            "green": float(self.green),
            "red": float(self.red),
            "centroids": [float(c) for c in self.centroids],
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdPair":
        return cls(float(d["green"]), float(d["red"]), tuple(float(c) for c in d["centroids"]), bool(d["degenerate"]))


def _segment_sse(v: np.ndarray) -> float:
    return math.fsum((v - v.mean()) ** 2)


def kmeans_1d_exact(values: Sequence[float], k: int) -> KMeans1D:
    """Optimal contiguous partition of the sorted values into ``k`` groups.

    Dynamic programming over sorted order, O(k n^2). With fewer distinct
    values than ``k`` the distinct values themselves are returned and the
    result is flagged degenerate.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyValues("k-means needs at least one value")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if not np.all(np.isfinite(x)):
        raise ValueError("values contain non-finite entries")

    distinct = np.unique(x)
    if distinct.size < k:
        labels = np.searchsorted(distinct, x)
        return KMeans1D(tuple(float(c) for c in distinct), labels, 0.0, True)

    order = np.argsort(x, kind="stable")
    v = x[order]
    n = v.size
    # shift by the mean before forming prefix sums to limit cancellation
    s = v - v.mean()
    S1 = np.concatenate(([0.0], np.cumsum(s)))
    S2 = np.concatenate(([0.0], np.cumsum(s * s)))

    def sse(a: np.ndarray, b: int) -> np.ndarray:
        cnt = b - a
        return np.maximum(S2[b] - S2[a] - (S1[b] - S1[a]) ** 2 / cnt, 0.0)

    cost = np.full((k + 1, n + 1), np.inf)
    split = np.zeros((k + 1, n + 1), dtype=np.int64)
    cost[1, 1:] = sse(np.zeros(n, dtype=np.int64), np.arange(1, n + 1))
    for m in range(2, k + 1):
        for i in range(m, n + 1):
            j = np.arange(m - 1, i)
            cand = cost[m - 1, j] + sse(j, i)
            best = int(np.argmin(cand))
            cost[m, i] = cand[best]
            split[m, i] = j[best]

    bounds = [n]
    for m in range(k, 1, -1):
        bounds.append(int(split[m, bounds[-1]]))
    bounds.append(0)
    bounds.reverse()

    sorted_labels = np.empty(n, dtype=np.int64)
    centroids = []
    total = []
    for c in range(k):
        a, b = bounds[c], bounds[c + 1]
        sorted_labels[a:b] = c
        seg = v[a:b]
        centroids.append(float(seg.mean()))
        total.append(_segment_sse(seg))
    labels = np.empty(n, dtype=np.int64)
    labels[order] = sorted_labels
    return KMeans1D(tuple(centroids), labels, math.fsum(total), False)


def derive_thresholds(values: Sequence[float]) -> ThresholdPair:
    """Split the values into three level bands and place the thresholds at
    the midpoints between adjacent band centroids.

    When the values hold fewer than three distinct levels, both thresholds
    collapse onto the midpoint of the extreme levels and the pair is
    degenerate.
    """
    km = kmeans_1d_exact(values, BANDS)
    c = km.centroids
    if km.degenerate:
        level = (c[0] + c[-1]) / 2
        return ThresholdPair(level, level, c, True)
    return ThresholdPair((c[0] + c[1]) / 2, (c[1] + c[2]) / 2, c, False)
