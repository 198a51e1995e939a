import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# the whole suite must finish within this many seconds (acceptance criterion 8)
SUITE_BUDGET_S = 60.0

_results: dict[int, tuple[str, list[str]]] = {}
_started = time.monotonic()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _results.setdefault(number, (title, []))[1].append(report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    elapsed = time.monotonic() - _started
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        title, outcomes = _results[number]
        ok = all(o == "passed" for o in outcomes)
        extra = ""
        if number == 8:
            extra = f" (suite wall-clock {elapsed:.1f} s, limit {SUITE_BUDGET_S:.0f} s)"
            ok = ok and elapsed < SUITE_BUDGET_S
        tr.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}{extra}")


def pytest_sessionfinish(session, exitstatus):
    if 8 in _results and time.monotonic() - _started >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
