"""Shared solver fixtures; the expensive solves run once per session."""

import numpy as np
import pytest

from twlab import auxsys, distribution, oracles, painleve2


@pytest.fixture(scope="session")
def hm():
    return painleve2.solve_hastings_mcleod()


@pytest.fixture(scope="session")
def hm_deep():
    # reaches internal t = -15.5 for the tail-constant extraction
    return painleve2.solve_hastings_mcleod(t_min=-16.0, t_max=13.0, n=58001)


@pytest.fixture(scope="session")
def aux_lin(hm):
    return auxsys.integrate_linear(hm)


@pytest.fixture(scope="session")
def aux_nl(hm):
    return auxsys.integrate_nonlinear(hm)


@pytest.fixture(scope="session")
def aux_deep(hm_deep):
    return auxsys.integrate_linear(hm_deep, t_start=12.0, t_end=-15.5)


@pytest.fixture(scope="session")
def fredholm_table():
    grid = np.linspace(-9.0, 4.5, 271)
    vals = np.array([oracles.airy_kernel_fredholm(t, 120) for t in grid])
    return distribution.table_from_values(2, grid, vals)
