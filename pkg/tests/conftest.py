"""Acceptance bookkeeping: one PASS/FAIL line per criterion at session end."""

import pytest

_RESULTS: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(id, tolerance, limit): acceptance criterion with its tolerance and time budget (s)")


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    cid, tol, limit = m.args
    rec = _RESULTS.setdefault(cid, {"tol": tol, "limit": limit, "ok": True, "time": 0.0, "ran": False})
    if call.when == "call":
        rec["time"] += call.duration
        rec["ran"] = True
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        rec["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=lambda c: int(c[2:])):
        r = _RESULTS[cid]
        limit = f"{r['limit']}s" if isinstance(r["limit"], (int, float)) else r["limit"]
        status = "PASS" if r["ok"] and r["ran"] else "FAIL"
        tr.write_line(f"{cid:<5} {status}  tolerance: {r['tol']:<32} runtime: {r['time']:.3f}s (limit {limit})")
