import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from rht.cohomology import LieAlgebra

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


def heisenberg(n: int) -> LieAlgebra:
    m = 2 * n + 1
    basis = [f"e{k}" for k in range(1, m + 1)]
    sc = {(f"e{2 * k - 1}", f"e{2 * k}"): {f"e{m}": 1} for k in range(1, n + 1)}
    return LieAlgebra(basis, sc, name=f"h{m}")


def abelian(m: int) -> LieAlgebra:
    return LieAlgebra([f"e{k}" for k in range(1, m + 1)], name=f"ab{m}")


def filiform5() -> LieAlgebra:
    return LieAlgebra([f"e{k}" for k in range(1, 6)],
                      {("e1", "e2"): {"e3": 1}, ("e1", "e3"): {"e4": 1}, ("e1", "e4"): {"e5": 1}}, name="f5")


def h3_plus_r2() -> LieAlgebra:
    return LieAlgebra([f"e{k}" for k in range(1, 6)], {("e1", "e2"): {"e3": 1}}, name="h3r2")


@pytest.fixture(scope="session")
def corpus() -> Path:
    return CORPUS


# acceptance criteria report: filled by test_acceptance, printed after the run
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
