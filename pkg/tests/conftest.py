from __future__ import annotations

from typing import List, Tuple

_CRITERIA: List[Tuple[int, bool, str]] = []


def record_criterion(number: int, ok: bool, text: str) -> None:
    """Register one acceptance line; all lines are printed at the end of the run."""
    _CRITERIA.append((number, ok, text))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(_CRITERIA):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
