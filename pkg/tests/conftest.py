import numpy as np
import pytest

from dotgain import (CavityParams, QuadratureConfig, build_ndqd, mhz_to_uev,
                     susceptibility_point, symmetric_bias_leads)

# operating point used throughout: the gain-regime DQD
G_COUPLING = mhz_to_uev(50.0)
OMEGA_C = mhz_to_uev(7880.5)
KAPPA = mhz_to_uev(3.15)


@pytest.fixture(scope="session")
def fig2_medium():
    return build_ndqd(7.0, 16.4, G_COUPLING, 4)


@pytest.fixture(scope="session")
def fig2_leads():
    return symmetric_bias_leads(2.6, 250.0, 0.69)


@pytest.fixture(scope="session")
def equilibrium_leads():
    return symmetric_bias_leads(2.6, 0.0, 0.69)


@pytest.fixture(scope="session")
def fig2_cavity():
    return CavityParams(omega_c=OMEGA_C, kappa=KAPPA)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels(fig2_medium, fig2_leads):
    # compile the jitted kernels once so timed tests measure algorithm cost
    susceptibility_point(OMEGA_C, fig2_leads, fig2_medium,
                         QuadratureConfig())


def rel_err(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
