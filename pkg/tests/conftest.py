"""Shared pytest plumbing.

Acceptance tests print one ACCEPT line each, but stdout capture hides those
in a plain `pytest -v` run. They are recorded here too and replayed in the
terminal summary so every gate verdict is visible in any invocation.
"""

_accept_lines: list[str] = []


def record_accept(line: str) -> None:
    _accept_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _accept_lines:
        terminalreporter.section("acceptance gate")
        for line in _accept_lines:
            terminalreporter.write_line(line)
