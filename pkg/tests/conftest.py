from __future__ import annotations

import socket
from pathlib import Path

import pytest

from smecs.harvest import FixtureTransport
from smecs.vocab import load_default_vocabularies

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    """The whole suite runs offline; any attempted connection is a test bug."""

    def deny(*args, **kwargs):
        raise RuntimeError("network access is disabled in the test suite")

    monkeypatch.setattr(socket.socket, "connect", deny)
    monkeypatch.setattr(socket, "create_connection", deny)


@pytest.fixture()
def demo_transport() -> FixtureTransport:
    return FixtureTransport(FIXTURES / "demo")


@pytest.fixture()
def errors_transport() -> FixtureTransport:
    return FixtureTransport(FIXTURES / "errors")


@pytest.fixture(scope="session")
def vocabs():
    return load_default_vocabularies()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance.py" not in str(getattr(report, "nodeid", "")):
                continue
            name = report.nodeid.split("::")[-1]
            verdict = "PASS" if status == "passed" else "FAIL"
            lines.append(f"[{verdict}] {name}")
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
