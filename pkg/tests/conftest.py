"""Shared pytest wiring.

The acceptance tests record a one-line verdict per criterion; printing
them from a terminal-summary hook keeps the lines visible under normal
output capture.
"""

_CRITERIA: dict[int, str] = {}


def record_criterion(num: int, ok: bool, detail: str) -> None:
    _CRITERIA[num] = f"[criterion {num}] {'PASS' if ok else 'FAIL'}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[num])
