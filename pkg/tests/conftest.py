import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERION = re.compile(r"test_acceptance\.py::(?:\w+::)?test_criterion_(\d+)")
_criteria: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None:
        return
    if report.when == "call" or report.outcome != "passed":
        n = int(m.group(1))
        _criteria[n] = _criteria.get(n, True) and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _criteria[n] else 'FAIL'}")
