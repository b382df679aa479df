from __future__ import annotations

import datetime as dt
from pathlib import Path

import pytest

from gridwindows.synthetic import synthetic_days

DATA = Path(__file__).parent / "data"

_acceptance: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def three_families():
    """120 days: 40 each of flat, evening-peak and dual-peak, +-2% noise."""
    return synthetic_days(per_family=40, noise=0.02, seed=0)


def make_csv(tmp_path: Path, name: str, text: str) -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def day_rows(date: dt.date, loads, renewables=None, hours=range(24)) -> list[str]:
    rows = []
    for h in hours:
        ren = "" if renewables is None else "," + ",".join(str(r[h]) for r in renewables)
        rows.append(f"{date.isoformat()}T{h:02d}:00,{loads[h]}{ren}")
    return rows


def pytest_runtest_logreport(report):
    label = dict(report.user_properties).get("acceptance")
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance.append((label, "PASS" if report.passed else "FAIL"))


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            item.user_properties.append(("acceptance", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in sorted(_acceptance):
        terminalreporter.write_line(f"{outcome}  {label}")
