import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print the one-line verdicts collected by the acceptance tests."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance verdicts")
        for line in lines:
            terminalreporter.write_line(line)
