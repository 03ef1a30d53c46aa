import numpy as np
import pytest
from hypothesis import settings

from zetalab import build_tables, scan_zeros

settings.register_profile("zetalab", database=None, deadline=None, max_examples=40,
                          derandomize=True)
settings.load_profile("zetalab")

# fixed seed for every Monte Carlo check; never tuned to make a check pass
ACCEPTANCE_SEED = 1


@pytest.fixture(scope="session")
def zeros_1000():
    return scan_zeros(1000.0)


@pytest.fixture(scope="session")
def zeros_5000():
    return scan_zeros(5000.0)


@pytest.fixture(scope="session")
def tables_1e5():
    return build_tables(100_000)


@pytest.fixture(scope="session")
def tables_1e6():
    return build_tables(1_000_000)


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture(scope="session")
def acceptance_seed():
    return ACCEPTANCE_SEED


CRITERION_LINES: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; the caller asserts afterwards."""

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        CRITERION_LINES[str(label)] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    def order(label):
        digits = "".join(ch for ch in label if ch.isdigit())
        return int(digits), label

    for label in sorted(CRITERION_LINES, key=order):
        terminalreporter.write_line(CRITERION_LINES[label])
