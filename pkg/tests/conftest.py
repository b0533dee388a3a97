"""Shared test hooks: surface the acceptance-gate verdict lines.

The acceptance tests record one ``criterion N (...): PASS/FAIL`` line
each; this hook reprints them after the run so they are visible even
with output capturing enabled.
"""

VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICTS:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance gate:")
        for line in VERDICTS:
            terminalreporter.write_line("  " + line)
