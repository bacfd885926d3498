import pytest

_LINES = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_line(request):
    """Record one summary line per acceptance criterion."""
    lines = request.config.stash.setdefault(_LINES, {})

    def record(number: int, title: str, passed: bool, detail: str):
        lines[number] = f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail}"
        print(lines[number])

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
