import numpy as np
import pytest

from qubobox.bench import gen_random_spd
from qubobox.linalg import SpdSystem


@pytest.fixture
def unit_system():
    return SpdSystem(np.array([[1.0]]), np.array([0.0]))


@pytest.fixture
def unit_system_b1():
    return SpdSystem(np.array([[1.0]]), np.array([1.0]))


def random_system(d, seed):
    return gen_random_spd(d, seed)


ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False,
                     help="also run the long d=20 simulated-annealing sweep")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary, then assert."""
    def check(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"
    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
