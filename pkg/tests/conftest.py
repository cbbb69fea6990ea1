"""Shared fixtures and the acceptance-suite reporter.

Tests marked @pytest.mark.acceptance(num, title) get one PASS/FAIL line
each in the terminal summary, so the acceptance run is auditable at a
glance.
"""

import pytest

_results: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, title = marker.args
    if report.when == "setup" and report.failed:
        _results[num] = ("FAIL", title)
    elif report.when == "call":
        _results[num] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(_results):
        status, title = _results[num]
        terminalreporter.write_line(f"criterion {num:2d} [{status}] {title}")
