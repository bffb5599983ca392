"""Shared test plumbing.

The acceptance module tags its tests with a criterion number and label;
a hook collects each tagged test's outcome and the terminal summary gets
one pass or fail line per criterion, so the verdicts survive in plain
text even when pytest captures everything else.
"""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and hasattr(item, "acceptance_tag"):
        number, label = item.acceptance_tag
        verdict = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _acceptance_results.append((number, label, verdict))


@pytest.fixture
def acceptance(request):
    """Tag the running test as checking one numbered acceptance criterion."""

    def tag(number: int, label: str) -> None:
        request.node.acceptance_tag = (number, label)

    return tag


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, verdict in sorted(_acceptance_results):
        terminalreporter.write_line(f"criterion {number}: {verdict} - {label}")
