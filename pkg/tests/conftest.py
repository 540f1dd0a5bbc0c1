import pytest
from hypothesis import settings

settings.register_profile("repo", max_examples=150, deadline=None)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line for the acceptance summary, then assert."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
