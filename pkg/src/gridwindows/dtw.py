"""Dynamic time warping with an optional Sakoe-Chiba band.

Local cost is the squared difference, the step pattern is symmetric
``{(1,0), (0,1), (1,1)}`` without weights, and the reported distance is the
square root of the accumulated cost. The distance-only recursion keeps two
rows; path recovery keeps the full matrix and breaks ties in the order
diagonal, advance-``i``, advance-``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba as nb
import numpy as np

from .errors import BandTooNarrow, ConfigError, EmptySequence

_NO_BAND = -1


@dataclass(frozen=True)
class DtwConfig:
    """``band_radius`` limits alignments to ``|i - j| <= band_radius``; None is unconstrained."""

    band_radius: int | None = None

    def __post_init__(self):
        if self.band_radius is not None and self.band_radius < 0:
            raise ConfigError(f"band_radius must be non-negative, got {self.band_radius}")

    def radius_for(self, n: int, m: int) -> int:
        if self.band_radius is None:
            return _NO_BAND
        if self.band_radius < abs(n - m):
            raise BandTooNarrow(f"band radius {self.band_radius} < length difference {abs(n - m)}")
        return self.band_radius


@nb.njit(cache=True)
def _accumulated_last(x, y, r):
    # two-row recursion; y is the (shorter) inner dimension
    n, m = x.shape[0], y.shape[0]
    prev = np.full(m + 1, np.inf)
    cur = np.full(m + 1, np.inf)
    prev[0] = 0.0
    for i in range(1, n + 1):
        cur[:] = np.inf
        lo, hi = 1, m
        if r >= 0:
            lo = max(1, i - r)
            hi = min(m, i + r)
        xi = x[i - 1]
        for j in range(lo, hi + 1):
            d = xi - y[j - 1]
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = d * d + best
        prev, cur = cur, prev
    return prev[m]


@nb.njit(cache=True)
def _accumulated_matrix(x, y, r):
    n, m = x.shape[0], y.shape[0]
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        lo, hi = 1, m
        if r >= 0:
            lo = max(1, i - r)
            hi = min(m, i + r)
        xi = x[i - 1]
        for j in range(lo, hi + 1):
            d = xi - y[j - 1]
            best = D[i - 1, j - 1]
            if D[i - 1, j] < best:
                best = D[i - 1, j]
            if D[i, j - 1] < best:
                best = D[i, j - 1]
            D[i, j] = d * d + best
    return D


@nb.njit(cache=True)
def _backtrack(D):
    # D is the padded (n+1, m+1) matrix; returns 0-based path arrays
    i, j = D.shape[0] - 1, D.shape[1] - 1
    pi = np.empty(i + j, np.int64)
    pj = np.empty(i + j, np.int64)
    k = 0
    while True:
        pi[k] = i - 1
        pj[k] = j - 1
        k += 1
        if i == 1 and j == 1:
            break
        diag = D[i - 1, j - 1]
        up = D[i - 1, j]
        left = D[i, j - 1]
        if diag <= up and diag <= left:
            i -= 1
            j -= 1
        elif up <= left:
            i -= 1
        else:
            j -= 1
    return pi[:k][::-1].copy(), pj[:k][::-1].copy()


@nb.njit(cache=True)
def _cross_cost(X, C, r):
    n, k = X.shape[0], C.shape[0]
    out = np.empty((n, k))
    for a in range(n):
        for b in range(k):
            out[a, b] = _accumulated_last(X[a], C[b], r)
    return out


@nb.njit(cache=True)
def _dba_step(avg, members, r):
    # one barycenter update: align each member to avg, average aligned values
    L = avg.shape[0]
    sums = np.zeros(L)
    counts = np.zeros(L)
    costs = np.empty(members.shape[0])
    for s in range(members.shape[0]):
        D = _accumulated_matrix(avg, members[s], r)
        costs[s] = D[D.shape[0] - 1, D.shape[1] - 1]
        pi, pj = _backtrack(D)
        for t in range(pi.shape[0]):
            sums[pi[t]] += members[s, pj[t]]
            counts[pi[t]] += 1.0
    return sums / counts, costs


def as_series(x: Sequence[float]) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D sequence, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptySequence("DTW needs non-empty sequences")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sequence contains non-finite values")
    return arr


def dtw_cost(x: Sequence[float], y: Sequence[float], cfg: DtwConfig | None = None) -> float:
    """Minimum accumulated squared difference over admissible warping paths."""
    x, y = as_series(x), as_series(y)
    r = (cfg or DtwConfig()).radius_for(x.size, y.size)
    if y.size > x.size:
        x, y = y, x
    return float(_accumulated_last(x, y, r))


def dtw_distance(x: Sequence[float], y: Sequence[float], cfg: DtwConfig | None = None) -> float:
    return float(np.sqrt(dtw_cost(x, y, cfg)))


def dtw_path(
    x: Sequence[float], y: Sequence[float], cfg: DtwConfig | None = None
) -> tuple[list[tuple[int, int]], float]:
    """Optimal alignment path and its DTW distance.

    >>> dtw_path([0, 0, 1], [0, 1])
    ([(0, 0), (1, 0), (2, 1)], 0.0)
    """
    x, y = as_series(x), as_series(y)
    r = (cfg or DtwConfig()).radius_for(x.size, y.size)
    D = _accumulated_matrix(x, y, r)
    pi, pj = _backtrack(D)
    path = [(int(i), int(j)) for i, j in zip(pi, pj)]
    return path, float(np.sqrt(D[-1, -1]))


def cross_cost(X: np.ndarray, C: np.ndarray, cfg: DtwConfig | None = None) -> np.ndarray:
    """Squared DTW cost between every row of ``X`` and every row of ``C``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.float64)
    r = (cfg or DtwConfig()).radius_for(X.shape[1], C.shape[1])
    return _cross_cost(X, C, r)


def dba_step(avg: np.ndarray, members: np.ndarray, cfg: DtwConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """One barycenter-averaging update.

    Returns the updated average and the per-member squared DTW cost of the
    *input* average.
    """
    avg = np.ascontiguousarray(avg, dtype=np.float64)
    members = np.ascontiguousarray(members, dtype=np.float64)
    r = (cfg or DtwConfig()).radius_for(avg.shape[0], members.shape[1])
    return _dba_step(avg, members, r)
