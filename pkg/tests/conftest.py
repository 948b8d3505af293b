import numpy as np
import pytest
from hypothesis import strategies as st

from qbmbs.qsim import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, qubits=1) -> StateVector:
    v = rng.normal(size=1 << qubits) + 1j * rng.normal(size=1 << qubits)
    return StateVector(v / np.linalg.norm(v))


seeds = st.integers(min_value=0, max_value=2**32 - 1)
bit_lists = st.lists(st.integers(0, 1), min_size=1, max_size=24)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
