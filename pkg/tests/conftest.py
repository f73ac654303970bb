import numpy as np
import pytest

from saddlesim.config import SimConfig
from saddlesim.grid import build_grid


@pytest.fixture(scope="session")
def tiny_config():
    # small enough that a factorization is instant, big enough to be nontrivial
    return SimConfig(re=1000.0, nr=9, nz=13, tau=0.01, t_end=0.05,
                     grading=1.0, out_dir="")


@pytest.fixture(scope="session")
def tiny_grid(tiny_config):
    return build_grid(tiny_config)


@pytest.fixture(scope="session")
def graded_config():
    return SimConfig(re=1000.0, nr=17, nz=11, tau=0.005, t_end=0.02,
                     grading=0.9, out_dir="")


@pytest.fixture(scope="session")
def graded_grid(graded_config):
    return build_grid(graded_config)


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per criterion, echoed in a
# dedicated terminal section so the verdicts survive output capture

ACCEPTANCE_LINES: list[tuple[int, str]] = []


@pytest.fixture(scope="session")
def acceptance():
    def report(n: int, ok: bool, detail: str) -> bool:
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append((n, line))
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
