"""Shared fixtures: layouts, the worked-example states, seeded randomness."""

from pathlib import Path

import numpy as np
import pytest

from ssr_ent.config import Tolerances
from ssr_ent.core.fock import TWO_ELECTRON_SINGLET, ModeLayout, enumerate_basis
from ssr_ent.core.ssr import two_orbital_state
from ssr_ent.engine.catalysis import CatalystSpec, build_catalyst

REPO_ROOT = Path(__file__).resolve().parent.parent
STATES_DIR = REPO_ROOT / "states"


@pytest.fixture(autouse=True)
def _clear_tolerance_env(monkeypatch):
    monkeypatch.delenv("SSR_ENT_TOLERANCE", raising=False)
    monkeypatch.delenv("SSR_ENT_CONFIG", raising=False)


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def system_layout():
    return ModeLayout.two_orbital()


@pytest.fixture
def catalyst_layout():
    return ModeLayout.two_orbital(catalyst=True)


@pytest.fixture
def singlet_basis(system_layout):
    return tuple(enumerate_basis(system_layout, TWO_ELECTRON_SINGLET))


@pytest.fixture
def example2():
    """rho = 0.4|00,11> + sqrt(0.84)|11,00>, sigma = 0.3|01,10> + sqrt(0.91)|10,01>,
    and the R = 1/2, r = 1/4 catalyst."""
    rho = two_orbital_state(1.0, 0.16, 0.5)
    sigma = two_orbital_state(0.0, 0.5, 0.09)
    tau = build_catalyst(CatalystSpec(0.5, 0.25, 0.25))
    return rho, sigma, tau


@pytest.fixture
def example1():
    """Equal weights 1/2; sigma wins the even sector, rho wins the odd one."""
    return two_orbital_state(0.5, 0.16, 0.1), two_orbital_state(0.5, 0.09, 0.3)


@pytest.fixture
def states_dir():
    return STATES_DIR
