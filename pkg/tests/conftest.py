"""Acceptance bookkeeping: every test marked ``criterion(n, title)`` feeds one
PASS/FAIL line per criterion in the terminal summary."""

from __future__ import annotations

import pytest

_criteria: dict = {}  # n -> {"title": str, "nodes": set, "failed": set, "done": set}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        n, title = mark.args
        entry = _criteria.setdefault(n, {"title": title, "nodes": set(), "failed": set(), "done": set()})
        entry["nodes"].add(item.nodeid)


def pytest_runtest_logreport(report):
    for entry in _criteria.values():
        if report.nodeid not in entry["nodes"]:
            continue
        # a skipped acceptance test verified nothing, so it counts against
        if report.failed or report.skipped:
            entry["failed"].add(report.nodeid)
        if report.when == "call" or report.skipped:
            entry["done"].add(report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        ran = e["done"] >= e["nodes"]
        ok = ran and not e["failed"]
        status = "PASS" if ok else ("FAIL" if e["failed"] or ran else "NOT RUN")
        count = f"{len(e['nodes']) - len(e['failed'])}/{len(e['nodes'])} tests"
        terminalreporter.write_line(f"criterion {n}: {status}  {e['title']} ({count})")
