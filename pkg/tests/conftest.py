import pytest

# lines printed by the acceptance tests, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report(capsys):
    def emit(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
