import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20170517)


def fd_gradient(fun, x, h=1e-6):
    """Central differences of a scalar function of a real vector."""
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def report_criterion(capsys):
    """Record and print one pass/fail line for an acceptance criterion."""

    def report(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[number] = (bool(ok), detail)
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")

    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
