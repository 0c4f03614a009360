"""
Pytest configuration and fixtures for entanglab tests.

Environment variables are loaded from .env.test by pytest-dotenv plugin.
See pyproject.toml [tool.pytest.ini_options] env_files setting.
"""

import numpy as np
import pytest

from entanglab.models import Region, Window
from entanglab.physics.generators import bell_state, chain, ghz_state, gibbs_state
from entanglab.physics.states import probability_table
from entanglab.schemas import GibbsSpec, IsingSpec, RunHeader
from tests.test_data import Models, Seeds


@pytest.fixture
def rng():
    """Seeded generator, fresh for every test."""
    return np.random.default_rng(Seeds.DEFAULT)


@pytest.fixture
def ghz3():
    return ghz_state(chain(3))


@pytest.fixture
def ghz3_measure(ghz3):
    return probability_table(ghz3)


@pytest.fixture
def bell():
    return bell_state()


@pytest.fixture
def bell_measure(bell):
    return probability_table(bell)


@pytest.fixture
def chain20() -> Window:
    return chain(20)


@pytest.fixture
def site():
    """Single-site region factory: site(window, u)."""

    def make(window: Window, u: int) -> Region:
        return Region(window, (u,))

    return make


@pytest.fixture
def gibbs_chain():
    """Square-root state of a nearest-neighbor classical Gibbs chain."""
    return gibbs_state(GibbsSpec(**Models.GIBBS_CHAIN))


@pytest.fixture
def ising_small():
    """Spec of a six-site subcritical chain, solved densely."""
    return IsingSpec(**Models.ISING_SMALL)


@pytest.fixture
def header() -> RunHeader:
    return RunHeader(config_hash="0" * 64, version="0.1.0", seed=Seeds.DEFAULT)


@pytest.fixture
def out_dir(tmp_path):
    """Empty output directory for repository and CLI tests."""
    path = tmp_path / "results"
    path.mkdir()
    return path
