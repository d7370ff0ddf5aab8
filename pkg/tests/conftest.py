from __future__ import annotations

import pytest

from lagflow.ode_family import find_periodic, load_seeds

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def report():
    """Record the one-line outcome of an acceptance criterion."""
    return record


@pytest.fixture(scope="session")
def seeds():
    return {rec.name: rec for rec in load_seeds()}


@pytest.fixture(scope="session")
def orbits(seeds):
    return {name: find_periodic(rec.params, rec.state, period_hint=rec.period_hint) for name, rec in seeds.items()}
