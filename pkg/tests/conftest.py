import numpy as np
import pytest
from hypothesis import strategies as st

from orthosup.machines import MachineCoeffs
from orthosup.qcore import QubitState


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def assert_close(a, b, atol):
    a, b = np.asarray(a), np.asarray(b)
    dev = np.max(np.abs(a - b)) if a.size else 0.0
    assert dev <= atol, f"max deviation {dev:.3e} > {atol:.0e}"


def same_ray(u, v, atol=1e-12):
    """True if normalized vectors differ only by a global phase."""
    return abs(abs(np.vdot(u, v)) - 1.0) <= atol


_angle = st.floats(0.0, 2 * np.pi, allow_nan=False)
_theta = st.floats(0.0, np.pi, allow_nan=False)


@st.composite
def qubit_states(draw):
    t, p, g = draw(_theta), draw(_angle), draw(_angle)
    return QubitState(np.cos(t / 2) * np.exp(1j * g), np.sin(t / 2) * np.exp(1j * (g + p)))


@st.composite
def machine_coeffs(draw, nonzero=False):
    lo = 0.05 if nonzero else 0.0
    hi = np.sqrt(1 - lo**2) if nonzero else 1.0
    return MachineCoeffs.from_polar(draw(st.floats(lo, hi)), draw(_angle), draw(_angle))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
