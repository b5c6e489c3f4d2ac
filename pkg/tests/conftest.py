"""Per-criterion PASS/FAIL summary for the acceptance suite."""
from collections import defaultdict

import pytest

_outcomes: dict[int, list[str]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    _titles[n] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes[n].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        if any(r == "failed" for r in results):
            status = "FAIL"
        elif all(r == "skipped" for r in results):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {n}: {status}  {_titles[n]}")
