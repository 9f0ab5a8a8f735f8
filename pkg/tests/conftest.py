import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    tag = getattr(getattr(item, "function", None), "criterion", None)
    if tag is None:
        return
    n, title = tag
    if rep.failed:
        _results[n] = ("FAIL", title)
    elif rep.when == "call" and rep.passed and n not in _results:
        _results[n] = ("PASS", title)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        status, title = _results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status} - {title}")
