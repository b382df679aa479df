"""k-means over daily profiles under DTW, with DBA centroids.

Every update step is guarded so that the clustering objective (sum of
squared DTW distances of days to their centroids) never increases: DBA
iterates are only accepted when they strictly lower the objective, each
centroid update keeps the better of a warm-started and a freshly
initialised DBA run, and reassignment always picks the nearest centroid.
Sums are taken with ``math.fsum`` so the comparisons are exact.
"""

from __future__ import annotations

import dataclasses
import datetime as dt
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dtw import DtwConfig, cross_cost, dba_step
from .errors import ConfigError, EmptyMembers, MixedSeriesKind, TooFewDays
from .ingest import HOURS, DaySeries, SeriesKind

NORMALIZATIONS = ("none", "zscore")
TREND_METHODS = ("dba", "medoid")


@dataclass(frozen=True)
class ClusteringConfig:
    k: int = 20
    max_iter: int = 50
    dba_iter: int = 10
    tol: float = 1e-4
    seed: int = 0
    dtw: DtwConfig = field(default_factory=DtwConfig)
    normalize: str = "none"

    def __post_init__(self):
        if self.k < 1 or self.max_iter < 1 or self.dba_iter < 1:
            raise ConfigError("k, max_iter and dba_iter must be positive")
        if self.tol < 0:
            raise ConfigError(f"tol must be non-negative, got {self.tol}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.normalize not in NORMALIZATIONS:
            raise ConfigError(f"normalize must be one of {NORMALIZATIONS}, got {self.normalize!r}")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "max_iter": self.max_iter,
            "dba_iter": self.dba_iter,
            "tol": float(self.tol),
            "seed": self.seed,
            "band_radius": self.dtw.band_radius,
            "normalize": self.normalize,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClusteringConfig":
        return cls(
            k=int(d["k"]),
            max_iter=int(d["max_iter"]),
            dba_iter=int(d["dba_iter"]),
            tol=float(d["tol"]),
            seed=int(d["seed"]),
            dtw=DtwConfig(d["band_radius"]),
            normalize=d["normalize"],
        )


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """Fitted clustering.

    ``assignments[i]`` is the cluster of the i-th input day (``dates[i]``).
    ``centroids`` live in the clustering space, which is raw MW unless the
    config asks for z-score normalisation.
    """

    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations_run: int
    seed: int
    kind: SeriesKind
    dates: tuple[dt.date, ...]
    config: ClusteringConfig
    inertia_history: tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return int(self.centroids.shape[0])

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == cluster)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": self.kind.value,
            "config": self.config.to_dict(),
            "seed": self.seed,
            "inertia": float(self.inertia),
            "iterations_run": self.iterations_run,
            "inertia_history": [float(x) for x in self.inertia_history],
            "centroids": [[float(v) for v in row] for row in self.centroids],
            "assignments": {d.isoformat(): int(c) for d, c in zip(self.dates, self.assignments)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClusterModel":
        dates = sorted(d["assignments"])
        return cls(
            centroids=np.array(d["centroids"], dtype=np.float64),
            assignments=np.array([d["assignments"][x] for x in dates], dtype=np.int64),
            inertia=float(d["inertia"]),
            iterations_run=int(d["iterations_run"]),
            seed=int(d["seed"]),
            kind=SeriesKind(d["kind"]),
            dates=tuple(dt.date.fromisoformat(x) for x in dates),
            config=ClusteringConfig.from_dict(d["config"]),
            inertia_history=tuple(float(x) for x in d["inertia_history"]),
        )


def normalize_profiles(X: np.ndarray, method: str = "none") -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if method == "none":
        return X
    if method == "zscore":
        mu = X.mean(axis=-1, keepdims=True)
        sd = X.std(axis=-1, keepdims=True)
        return np.where(sd > 0, (X - mu) / np.where(sd > 0, sd, 1.0), 0.0)
    raise ConfigError(f"unknown normalization {method!r}")


def _stack_members(members) -> np.ndarray:
    if len(members) == 0:
        raise EmptyMembers("DBA needs at least one member")
    M = np.vstack([np.asarray(m, dtype=np.float64) for m in members])
    if not np.all(np.isfinite(M)):
        raise ValueError("members contain non-finite values")
    return M


def dba_objective(members, avg, dtw_cfg: DtwConfig | None = None) -> float:
    """Sum of squared DTW distances from each member to ``avg``."""
    _, costs = dba_step(avg, _stack_members(members), dtw_cfg)
    return math.fsum(costs)


def _dba(M: np.ndarray, init: np.ndarray, iterations: int, cfg: DtwConfig | None) -> tuple[np.ndarray, list[float]]:
    avg = np.array(init, dtype=np.float64)
    proposal, costs = dba_step(avg, M, cfg)
    objective = math.fsum(costs)
    trace = [objective]
    for _ in range(iterations):
        if np.array_equal(proposal, avg):
            break
        following, costs = dba_step(proposal, M, cfg)
        value = math.fsum(costs)
        if not value < objective:
            break
        avg, objective = proposal, value
        trace.append(objective)
        proposal = following
    return avg, trace


def dba_mean(
    members: Sequence[Sequence[float]],
    init: Sequence[float],
    iterations: int = 10,
    dtw_cfg: DtwConfig | None = None,
    *,
    trace: bool = False,
):
    """DTW barycenter average of ``members`` starting from ``init``.

    Each iteration aligns every member to the current average and replaces
    each coordinate by the mean of the member values aligned to it. An
    iterate is kept only if it lowers the objective, so the returned
    average is never worse than ``init``. With ``trace=True`` also returns
    the objective after each accepted iterate (starting with ``init``'s).
    """
    M = _stack_members(members)
    avg, history = _dba(M, np.asarray(init, dtype=np.float64), iterations, dtw_cfg)
    return (avg, history) if trace else avg


def _nearest_to_mean(M: np.ndarray, cfg: DtwConfig | None) -> int:
    costs = cross_cost(M, M.mean(axis=0, keepdims=True), cfg)[:, 0]
    return int(np.argmin(costs))


def _kmeanspp(Z: np.ndarray, k: int, rng: np.random.Generator, cfg: DtwConfig) -> list[int]:
    n = Z.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = cross_cost(Z, Z[chosen[-1]][None, :], cfg)[:, 0]
    while len(chosen) < k:
        cum = np.cumsum(d2)
        if cum[-1] > 0:
            idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
            idx = min(idx, n - 1)
        else:
            pool = np.setdiff1d(np.arange(n), chosen)
            idx = int(pool[rng.integers(pool.size)])
        chosen.append(idx)
        d2 = np.minimum(d2, cross_cost(Z, Z[idx][None, :], cfg)[:, 0])
    return chosen


def _assign(Z: np.ndarray, C: np.ndarray, cfg: DtwConfig) -> tuple[np.ndarray, np.ndarray]:
    D = cross_cost(Z, C, cfg)
    labels = np.argmin(D, axis=1)
    return labels, D[np.arange(Z.shape[0]), labels]


def _fill_empty(labels: np.ndarray, cost: np.ndarray, C: np.ndarray, Z: np.ndarray) -> None:
    # move the worst-fitting day of a multi-member cluster into each empty one
    k = C.shape[0]
    while True:
        sizes = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(sizes == 0)
        if empty.size == 0:
            return
        donors = sizes[labels] > 1
        candidates = np.where(donors, cost, -np.inf)
        day = int(np.argmax(candidates))
        c = int(empty[0])
        labels[day] = c
        cost[day] = 0.0
        C[c] = Z[day]


def _update_centroid(M: np.ndarray, current: np.ndarray, cfg: ClusteringConfig) -> np.ndarray:
    warm, warm_trace = _dba(M, current, cfg.dba_iter, cfg.dtw)
    fresh, fresh_trace = _dba(M, M[_nearest_to_mean(M, cfg.dtw)], cfg.dba_iter, cfg.dtw)
    return fresh if fresh_trace[-1] < warm_trace[-1] else warm


def _check_days(days: Sequence[DaySeries], k: int) -> SeriesKind:
    if len(days) < k:
        raise TooFewDays(f"{len(days)} days cannot form {k} clusters")
    kinds = {d.kind for d in days}
    if len(kinds) > 1:
        raise MixedSeriesKind(f"days mix series kinds {sorted(x.value for x in kinds)}")
    return kinds.pop()


def cluster_days(days: Sequence[DaySeries], cfg: ClusteringConfig = ClusteringConfig()) -> ClusterModel:
    """Lloyd-style DTW k-means with DBA centroid updates.

    Days are put in (date, values) order before seeding, so the result does
    not depend on the order of ``days``. Iteration stops once a round
    improves the inertia by less than ``cfg.tol`` relative, or after
    ``cfg.max_iter`` rounds.
    """
    kind = _check_days(days, cfg.k)
    n = len(days)
    order = sorted(range(n), key=lambda i: (days[i].date, tuple(days[i].values)))
    Z = normalize_profiles(np.vstack([days[i].values for i in order]), cfg.normalize)
    rng = np.random.default_rng(cfg.seed)

    C = Z[_kmeanspp(Z, cfg.k, rng, cfg.dtw)].copy()
    labels, cost = _assign(Z, C, cfg.dtw)
    _fill_empty(labels, cost, C, Z)
    inertia = math.fsum(cost)
    history = [inertia]

    rounds = 0
    for rounds in range(1, cfg.max_iter + 1):
        for c in range(cfg.k):
            C[c] = _update_centroid(Z[labels == c], C[c], cfg)
        labels, cost = _assign(Z, C, cfg.dtw)
        _fill_empty(labels, cost, C, Z)
        new_inertia = math.fsum(cost)
        history.append(new_inertia)
        converged = new_inertia == 0 or inertia - new_inertia <= cfg.tol * inertia
        inertia = new_inertia
        if converged:
            break

    assignments = np.empty(n, dtype=np.int64)
    assignments[order] = labels
    C.setflags(write=False)
    return ClusterModel(
        centroids=C,
        assignments=assignments,
        inertia=inertia,
        iterations_run=rounds,
        seed=cfg.seed,
        kind=kind,
        dates=tuple(d.date for d in days),
        config=cfg,
        inertia_history=tuple(history),
    )


def assign_day(day: DaySeries, model: ClusterModel, dtw_cfg: DtwConfig | None = None) -> int:
    """Nearest centroid by DTW; ties go to the lowest cluster id."""
    if day.kind != model.kind:
        raise MixedSeriesKind(f"day is {day.kind.value} load, model was fit on {model.kind.value} load")
    z = normalize_profiles(day.values[None, :], model.config.normalize)
    costs = cross_cost(z, model.centroids, dtw_cfg or model.config.dtw)[0]
    return int(np.argmin(costs))


def sweep_k(
    days: Sequence[DaySeries], k_values: Sequence[int], cfg: ClusteringConfig = ClusteringConfig()
) -> list[tuple[int, float]]:
    """Fit once per k (seeded with ``cfg.seed + k``) and report the inertia."""
    for k in k_values:
        if k < 1:
            raise ConfigError(f"k must be positive, got {k}")
        _check_days(days, k)
    out = []
    for k in k_values:
        model = cluster_days(days, dataclasses.replace(cfg, k=k, seed=cfg.seed + k))
        out.append((k, model.inertia))
    return out


def medoid(members: np.ndarray, dtw_cfg: DtwConfig | None = None) -> int:
    """Index of the member with the smallest total DTW distance to the others."""
    D = np.sqrt(cross_cost(members, members, dtw_cfg))
    totals = np.array([math.fsum(row) for row in D])
    return int(np.argmin(totals))


def cluster_trends(days: Sequence[DaySeries], model: ClusterModel, method: str = "dba") -> np.ndarray:
    """Representative 24-hour trend of each cluster, in MW.

    ``dba`` uses the fitted centroid when clustering ran on raw MW and
    otherwise averages the raw member profiles; ``medoid`` picks the member
    minimising total DTW distance within the cluster.
    """
    if method not in TREND_METHODS:
        raise ConfigError(f"trend method must be one of {TREND_METHODS}, got {method!r}")
    if len(days) != model.assignments.size:
        raise ValueError("days do not match the fitted model")
    raw = np.vstack([d.values for d in days])
    space = normalize_profiles(raw, model.config.normalize)
    cfg = model.config
    trends = np.empty((model.k, HOURS))
    for c in range(model.k):
        idx = model.members(c)
        if method == "medoid":
            trends[c] = raw[idx[medoid(space[idx], cfg.dtw)]]
        elif cfg.normalize == "none":
            trends[c] = model.centroids[c]
        else:
            M = raw[idx]
            trends[c] = dba_mean(M, M[_nearest_to_mean(M, cfg.dtw)], cfg.dba_iter, cfg.dtw)
    return trends
