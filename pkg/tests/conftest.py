import sys

import numpy as np
import pytest

from pdcslit.correlations import build_kernels
from pdcslit.gain import CrystalParams, rate_to_gain
from pdcslit.slit import SlitGeometry

LOW_GAIN = rate_to_gain(1.5)
HIGH_GAIN = rate_to_gain(10.0)


@pytest.fixture(scope="session")
def geom():
    return SlitGeometry(0.2)


@pytest.fixture(scope="session")
def broadband(geom):
    return build_kernels(CrystalParams(g=LOW_GAIN, q0_norm=50.0), geom)


@pytest.fixture(scope="session")
def narrowband(geom):
    return build_kernels(CrystalParams(g=LOW_GAIN, q0_norm=1e-3), geom)


@pytest.fixture(scope="session")
def moderate(geom):
    """A mid-bandwidth crystal where neither limit applies."""
    return build_kernels(CrystalParams(g=HIGH_GAIN, q0_norm=2.0), geom)


@pytest.fixture
def x401():
    return np.linspace(-1.0, 1.0, 401)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
