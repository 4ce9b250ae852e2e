"""Shared test setup: hypothesis profile and the acceptance-criteria report.

Acceptance tests record one line per criterion through the ``criterion``
fixture; the lines are printed in a dedicated section at the end of the
pytest run so each criterion's verdict is visible at a glance.
"""

import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")

_CRITERIA = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    _CRITERIA[number] = (bool(passed), detail)


@pytest.fixture
def criterion():
    """Recorder for one acceptance criterion: criterion(n, passed, detail)."""
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        passed, detail = _CRITERIA[num]
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {word} - {detail}")
