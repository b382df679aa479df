"""Acceptance gate. Each test carries an ``acceptance`` label; the terminal
summary prints one PASS/FAIL line per label."""

import csv
import itertools
import json
import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import best_contiguous_partition, brute_dtw, purity
from gridwindows.cli import main
from gridwindows.clustering import ClusteringConfig, cluster_days, dba_mean, dba_objective
from gridwindows.dtw import DtwConfig, dba_step, dtw_distance
from gridwindows.report import load_report
from gridwindows.synthetic import days_to_records, records_to_csv, synthetic_year
from gridwindows.thresholds import ThresholdPair, derive_thresholds, kmeans_1d_exact
from gridwindows.windows import HourLabel, extract_windows, label_hours

REN = ["--col-renewable", "wind", "--col-renewable", "solar"]
ALPHABET = (0.0, 1.0, 2.0, 5.0)


def _small_pairs(total=10_000, seed=0):
    # every pair of sequences up to length 3, topped up with random longer ones
    short = [s for n in (1, 2, 3) for s in itertools.product(ALPHABET, repeat=n)]
    pairs = list(itertools.product(short, repeat=2))
    rng = np.random.default_rng(seed)
    while len(pairs) < total:
        n, m = rng.integers(1, 7, size=2)
        if max(n, m) > 3:
            pairs.append((tuple(rng.choice(ALPHABET, n)), tuple(rng.choice(ALPHABET, m))))
    return pairs


@pytest.mark.acceptance("AC1 DTW matches brute-force path enumeration")
def test_dtw_oracle():
    pairs = _small_pairs()
    expected = [brute_dtw(x, y) for x, y in pairs]
    t0 = time.perf_counter()
    got = [dtw_distance(x, y) for x, y in pairs]
    elapsed = time.perf_counter() - t0
    worst = max(abs(a - b) for a, b in zip(got, expected))
    assert len(pairs) == 10_000
    assert worst <= 1e-9
    assert elapsed < 5.0


@pytest.mark.acceptance("AC2 DTW identity, symmetry, band-0 equals L2")
def test_dtw_algebra():
    rng = np.random.default_rng(2)
    band0 = DtwConfig(0)
    for _ in range(1000):
        x, y = rng.uniform(0, 1e4, 24), rng.uniform(0, 1e4, 24)
        assert dtw_distance(x, x) == 0.0
        d = dtw_distance(x, y)
        assert abs(d - dtw_distance(y, x)) <= 1e-12 * max(1.0, d)
        l2 = math.sqrt(math.fsum((x - y) ** 2))
        assert abs(dtw_distance(x, y, band0) - l2) <= 1e-12 * max(1.0, l2)


@pytest.mark.acceptance("AC3 exact 1-D k-means equals exhaustive partition")
def test_kmeans_1d_exhaustive():
    rng = np.random.default_rng(3)
    for _ in range(500):
        n = int(rng.integers(1, 13))
        k = int(rng.integers(1, min(3, n) + 1))
        values = rng.uniform(-100, 100, n)
        km = kmeans_1d_exact(values, k)
        cost, cuts = best_contiguous_partition(values.tolist(), k)
        sizes = np.bincount(km.labels, minlength=k)
        assert tuple(int(c) for c in np.cumsum(sizes)[:-1]) == cuts
        assert abs(km.cost - cost) <= 1e-9


@pytest.mark.acceptance("AC4 threshold worked example and degenerate input")
def test_threshold_example():
    thr = derive_thresholds([1, 1, 1, 5, 5, 5, 9, 9, 9])
    assert thr.green == 3.0 and thr.red == 7.0
    flat = derive_thresholds([40.0] * 24)
    assert flat.degenerate and flat.green == flat.red


@pytest.mark.acceptance("AC5 inertia and DBA objective never increase")
def test_monotonicity(three_families):
    days, _ = three_families
    for seed in (0, 42, 7):
        model = cluster_days(days, ClusteringConfig(k=4, seed=seed, tol=0.0))
        hist = model.inertia_history
        assert len(hist) >= 2
        assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))

        for c in range(model.k):
            members = [days[i].values for i in model.members(c)]
            _, trace = dba_mean(members, members[0], 10, trace=True)
            assert all(b <= a for a, b in zip(trace, trace[1:]))

            # the unguarded update must also descend, up to rounding
            M = np.stack(members)
            avg = members[-1].copy()
            prev = dba_objective(members, avg)
            for _ in range(10):
                avg, _ = dba_step(avg, M)
                cur = dba_objective(members, avg)
                assert cur <= prev + 1e-9 * max(1.0, prev)
                prev = cur


@pytest.mark.acceptance("AC6 three-family recovery, purity >= 0.95, fit < 10 s")
def test_synthetic_recovery(data_dir, tmp_path):
    t0 = time.perf_counter()
    code = main(["fit", str(data_dir / "synthetic_3fam.csv"), *REN, "--k", "3", "--seed", "42", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t0
    assert code == 0
    with (data_dir / "synthetic_3fam_labels.csv").open() as fh:
        truth = {row["date"]: row["family"] for row in csv.DictReader(fh)}
    report = load_report(tmp_path / "report.json")
    dates = sorted(truth)
    assert purity([report.cluster_of(d) for d in dates], [truth[d] for d in dates]) >= 0.95
    assert elapsed < 10.0


grid = st.integers(0, 100_000).map(lambda v: v / 100)


@st.composite
def trend_and_thresholds(draw):
    trend = draw(st.lists(grid, min_size=24, max_size=24))
    if draw(st.booleans()):
        return trend, derive_thresholds(trend)
    a, b = draw(grid), draw(grid)
    return trend, ThresholdPair(min(a, b), max(a, b), (min(a, b), max(a, b)))


@pytest.mark.acceptance("AC7 labeling properties")
@settings(max_examples=1000, deadline=None)
@given(trend_and_thresholds(), st.floats(1e-3, 1e3), st.booleans())
def test_labeling(case, scale, wrap):
    trend, thr = case
    labels = label_hours(trend, thr)
    for v, lab in zip(trend, labels):
        assert not (lab is HourLabel.CHARGE and v >= thr.green)
        assert not (lab is HourLabel.V2G and v <= thr.red)
    assert extract_windows(labels, wrap=wrap).paint() == labels
    scaled = ThresholdPair(thr.green * scale, thr.red * scale, tuple(c * scale for c in thr.centroids), thr.degenerate)
    assert label_hours([v * scale for v in trend], scaled) == labels


@pytest.mark.acceptance("AC8 fit is byte-deterministic and reports round-trip")
def test_determinism(data_dir, tmp_path):
    runs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["fit", str(data_dir / "synthetic_3fam.csv"), *REN, "--k", "3", "--seed", "42", "--out", str(out)]) == 0
        runs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert runs[0] == runs[1]
    assert any(name.startswith("cluster_") for name in runs[0])
    text = runs[0]["report.json"].decode()
    assert load_report(tmp_path / "a" / "report.json").to_json() == text


@pytest.mark.acceptance("AC9 365 days, k=20: < 60 s, 20 plot files, green <= red")
def test_scale(tmp_path):
    path = tmp_path / "year.csv"
    path.write_text(records_to_csv(days_to_records(synthetic_year(seed=0))), encoding="utf-8")
    out = tmp_path / "out"
    t0 = time.perf_counter()
    assert main(["fit", str(path), *REN, "--k", "20", "--seed", "42", "--out", str(out)]) == 0
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    plots = sorted(p.name for p in out.glob("cluster_*.csv"))
    assert plots == sorted(f"cluster_{i}.csv" for i in range(20))
    doc = json.loads((out / "report.json").read_text())
    assert doc["meta"]["day_count"] == 365
    assert all(c["thresholds"]["green"] <= c["thresholds"]["red"] for c in doc["clusters"])
    assert sum(len(c["member_dates"]) for c in doc["clusters"]) == 365
