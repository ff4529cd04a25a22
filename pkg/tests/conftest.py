from contextlib import contextmanager

import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextmanager
    def record(number: int, title: str):
        notes: list[str] = []
        try:
            yield notes
        except BaseException:
            _ACCEPTANCE.append(f"FAIL  criterion {number:2d}: {title}  {'; '.join(notes)}")
            raise
        line = f"PASS  criterion {number:2d}: {title}  {'; '.join(notes)}"
        _ACCEPTANCE.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
