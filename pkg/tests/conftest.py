import pytest

from contourmin.engine import RunConfig, optimize
from contourmin.objective import make_benchmark

REFERENCE_RUNS = {
    "sphere_3": (1.0, 1.0, 1.0),
    "mccormick": (2.0, 2.0),
    "ackley": (2.0, 2.0),
}

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def reference_runs():
    """Default-config runs from the reference starting points, seed 0."""
    out = {}
    for name, x0 in REFERENCE_RUNS.items():
        cfg = RunConfig(name, x0, master_seed=0)
        out[name] = (cfg, optimize(make_benchmark(name), cfg))
    return out


@pytest.fixture
def record_criterion():
    def record(label, passed, detail=""):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
