import numpy as np
import pytest

from aircomp.lattice import hexagonal_lattice


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


@pytest.fixture(scope="session")
def hexagon():
    return hexagonal_lattice(1.0)


ACCEPTANCE = pytest.StashKey[dict]()
CRITERIA = 9


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(ACCEPTANCE, {})

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, CRITERIA + 1):
        terminalreporter.write_line(lines.get(number, f"criterion {number}: FAIL  did not complete"))
