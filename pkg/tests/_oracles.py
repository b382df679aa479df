"""Brute-force reference implementations, independent of the package code."""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def warping_paths(n: int, m: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Every monotone, continuous path from (0, 0) to (n-1, m-1)."""
    out = []

    def walk(path):
        i, j = path[-1]
        if (i, j) == (n - 1, m - 1):
            out.append(tuple(path))
            return
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            if i + di < n and j + dj < m:
                path.append((i + di, j + dj))
                walk(path)
                path.pop()

    walk([(0, 0)])
    return tuple(out)


@lru_cache(maxsize=None)
def _path_index(n: int, m: int, band: int | None):
    paths = [p for p in warping_paths(n, m) if band is None or all(abs(i - j) <= band for i, j in p)]
    width = max(len(p) for p in paths)
    I = np.zeros((len(paths), width), dtype=np.int64)
    J = np.zeros((len(paths), width), dtype=np.int64)
    mask = np.zeros((len(paths), width))
    for r, p in enumerate(paths):
        for c, (i, j) in enumerate(p):
            I[r, c], J[r, c], mask[r, c] = i, j, 1.0
    return paths, I, J, mask


def path_costs(x, y, band: int | None = None):
    """Squared cost of every admissible path, with the paths themselves."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    paths, I, J, mask = _path_index(len(x), len(y), band)
    C = (x[:, None] - y[None, :]) ** 2
    return paths, (C[I, J] * mask).sum(axis=1)


def brute_dtw(x, y, band: int | None = None) -> float:
    _, costs = path_costs(x, y, band)
    return math.sqrt(costs.min())


def path_cost(x, y, path) -> float:
    return sum((x[i] - y[j]) ** 2 for i, j in path)


def sse(values) -> float:
    if not len(values):
        return 0.0
    mu = sum(values) / len(values)
    return sum((v - mu) ** 2 for v in values)


def best_contiguous_partition(values, k: int) -> tuple[float, tuple[int, ...]]:
    """Exhaustive search over all contiguous k-partitions of the sorted values.

    Returns the minimal cost and the cut positions (indices into the sorted
    sequence where each new group starts).
    """
    v = sorted(values)
    n = len(v)
    best = (math.inf, ())
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        cost = sum(sse(v[a:b]) for a, b in zip(bounds, bounds[1:]))
        if cost < best[0]:
            best = (cost, cuts)
    return best


def purity(assignments, truth) -> float:
    by_cluster: dict[int, dict[str, int]] = {}
    for c, t in zip(assignments, truth):
        by_cluster.setdefault(int(c), {}).setdefault(t, 0)
        by_cluster[int(c)][t] += 1
    return sum(max(counts.values()) for counts in by_cluster.values()) / len(truth)
