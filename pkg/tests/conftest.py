import numpy as np
import pytest

from singleproxy.data import Dataset
from singleproxy.kernels import Bandwidths
from singleproxy.synth import SynthConfig, generate

ACCEPTANCE_LINES = []


def record(criterion, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def synthetic_split(n, m, seed):
    """Stage-1 dataset of n rows and an independent stage-2 sample of m rows."""
    d = generate(SynthConfig(n=n + m, seed=seed))
    return d.subset(np.arange(n)), d.subset(np.arange(n, n + m)).stage_two()


@pytest.fixture
def small_data():
    return generate(SynthConfig(n=12, seed=21))


@pytest.fixture
def unit_bw():
    return Bandwidths(1.0, 1.0, 1.0)


def one_row(a, y, w):
    return Dataset([a], [y], [w])
