import math

import numpy as np
import pytest

from agelab.liouville_packets import (
    EnergyGrid,
    NuSigmaGrid,
    gaussian_reference_kernel,
    to_age,
)

# reference setup: one sigma slice at sigma = nu_max / 2 = omega0, so the
# gaussian pure state gives rho(nu) ~ exp(-nu^2/2) and rho_hat(a) ~ exp(-a^2/2)
NU_MAX = 16.0
OMEGA0 = 8.0
OMEGA_MAX = 24.0
N_OMEGA = 1024


@pytest.fixture(scope="session")
def energy_grid():
    return EnergyGrid(OMEGA_MAX, N_OMEGA)


@pytest.fixture(scope="session")
def ref_grid():
    return NuSigmaGrid.single_slice(NU_MAX, 4096)


@pytest.fixture(scope="session")
def ref_kernel(ref_grid, energy_grid):
    return gaussian_reference_kernel(ref_grid, energy_grid, OMEGA0)


@pytest.fixture(scope="session")
def ref_age(ref_kernel):
    return to_age(ref_kernel)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gaussian_nu(grid, centre=0.0, a0=0.0):
    """Unit-mass ``exp(-(nu - centre)^2 / 2) exp(-i nu a0)`` on a single slice."""
    nu = grid.nu
    return np.pi ** -0.25 * np.exp(-((nu - centre) ** 2) / 2 - 1j * nu * a0)


SQRT_HALF = math.sqrt(0.5)


# acceptance lines collected by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
