import pytest

_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record and print one PASS/FAIL line per acceptance criterion."""

    def _report(number, title, ok, detail=""):
        line = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        print(line)
        _ACCEPTANCE.append((number, line))
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
