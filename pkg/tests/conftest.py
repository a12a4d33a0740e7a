"""Shared session fixtures plus the acceptance-criteria summary table."""

import pytest

from gaussvariants import arith, cuspform

ACCEPTANCE_REPORTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_REPORTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_REPORTS):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def r2_big():
    # covers: Bessel series (1e6 terms), mean square to 2^18, sharp
    # hyperboloid counts to R = 2^20, smoothed hyperboloids to X = 2^16
    return arith.r_d_table(2, 1_400_000)


@pytest.fixture(scope="session")
def delta():
    # covers the smoothed second moment at X = 2^12 (needs 40 X) and the
    # short-interval grid to 2^16 + window
    return cuspform.delta_form(164_000)


@pytest.fixture(scope="session")
def divisor_tables():
    d_all, d_odd = arith.divisor_counts(200 * 200 + 1)
    return d_all, d_odd


@pytest.fixture(scope="session")
def r_small():
    # r_d(n) for d = 1..6, n <= 500 (criterion 1 grid)
    return {d: arith.r_d_table(d, 500) for d in range(1, 7)}
