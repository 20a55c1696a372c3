import pytest

from entbounds import make_spectrum

ACCEPTANCE_LINES = []


@pytest.fixture
def ref34():
    """The 3 x 4 example system with spectra {0, 2, 4} and {0, 1, 6, 9}."""
    return make_spectrum([0, 2, 4]), make_spectrum([0, 1, 6, 9])


@pytest.fixture
def qubits():
    return make_spectrum([0, 1]), make_spectrum([0, 1])


@pytest.fixture
def acceptance():
    def record(criterion: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
