"""Fixtures shared by the slow acceptance suites."""

from functools import cache

import numpy as np
import pytest

from entanglab.models import Region, Tripartition
from entanglab.physics.ising import build_hamiltonian, ground_state
from entanglab.schemas import IsingSpec


@cache
def _chain_ground(n: int, b: float):
    spec = IsingSpec(dims=[n], couplings=[{"offset": [1], "J": 1.0}], b=b)
    return ground_state(build_hamiltonian(spec))


@pytest.fixture(scope="session")
def chain_ground():
    """Cached ground states of the open nearest-neighbor chain with J = 1: chain_ground(n, b)."""
    return _chain_ground


@pytest.fixture(scope="session")
def random_tripartition():
    """Random A, B, C covering the window with A and C nonempty: random_tripartition(window, rng)."""

    def make(window, rng) -> Tripartition:
        while True:
            labels = rng.integers(0, 3, window.site_count)
            if (labels == 0).any() and (labels == 2).any():
                return Tripartition(*(Region(window, tuple(np.flatnonzero(labels == k))) for k in range(3)))

    return make
