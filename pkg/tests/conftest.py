"""Shared fixtures: one session-wide sweep engine so expensive
diagonalizations are reused across test modules."""

import pytest

from dicke_g2 import BathParams, DickeParams, SweepEngine


@pytest.fixture(scope="session")
def engine():
    return SweepEngine(n_tr=50, workers=1)


@pytest.fixture(scope="session")
def baths():
    return BathParams()


@pytest.fixture(scope="session")
def params_n8():
    return DickeParams(n_qubits=8)


# acceptance-gate reporting: one line per criterion, echoed in the terminal
# summary so the PASS lines survive output capture
CRITERION_LINES = []


@pytest.fixture
def report():
    def _report(label: str, ok: bool, detail: str):
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'} - {detail}"
        CRITERION_LINES.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
