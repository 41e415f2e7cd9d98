import numpy as np
import pytest

from kgdopt.problems import random_quadratic

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>4}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def report():
    """Record one acceptance line, print it, and return the verdict."""
    def _report(key, ok, detail=""):
        ACCEPTANCE[str(key)] = (bool(ok), detail)
        print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return _report


def seeded_quadratics(count=20):
    """The fixed family used across tests: n cycles over (2, 10, 50),
    kappa over (10, 100, 1000), seeds 0..count-1."""
    out = []
    for seed in range(count):
        n = (2, 10, 50)[seed % 3]
        kappa = (10, 100, 1000)[(seed // 3) % 3]
        out.append(random_quadratic(n, kappa, seed=seed))
    return out


@pytest.fixture(scope="session")
def quadratics():
    return seeded_quadratics()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
