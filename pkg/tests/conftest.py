import csv
from pathlib import Path

import pytest

from shootout.core import Mechanism, PressureModel

DATA = Path(__file__).parent / "data"

_acceptance_lines: list[str] = []


def _read(name):
    with open(DATA / name, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def table2_golden():
    rows = {}
    for r in _read("table2.csv"):
        key = (PressureModel(r["model"]), Mechanism(r["mechanism"]))
        rows[key] = [r[str(n)] for n in range(1, 9)]
    return rows


@pytest.fixture(scope="session")
def table3_golden():
    return {Mechanism(r["mechanism"]): [r["m1"], r["m2"], r["m3"]] for r in _read("table3.csv")}


@pytest.fixture(scope="session")
def figure_points():
    return _read("figure_points.csv")


@pytest.fixture(scope="session")
def acceptance():
    """Record one line per acceptance criterion; printed in the terminal summary."""

    def record(criterion: int, passed: bool, detail: str) -> None:
        _acceptance_lines.append(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
