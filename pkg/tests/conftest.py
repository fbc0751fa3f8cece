import sys

CRITERION_LINES = []


def record_criterion(line):
    """Collect an acceptance line and echo it for captured output."""
    CRITERION_LINES.append(line)
    print(line, file=sys.stderr)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
