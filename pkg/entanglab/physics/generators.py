"""Hand-built and random test states, measures and matrices."""

from typing import Iterable, Optional

import numpy as np
from scipy.special import logsumexp

from entanglab.core.config import settings
from entanglab.core.errors import check_capacity
from entanglab.models import ProbabilityTable, PureState, Region, Window
from entanglab.physics.ising import classical_energy
from entanglab.schemas.model import GibbsSpec


def chain(n: int) -> Window:
    return Window((n,))


def ghz_state(window: Window) -> PureState:
    amplitudes = np.zeros(2**window.site_count)
    amplitudes[[0, -1]] = 1.0
    return PureState.normalized(window, amplitudes)


def bell_state() -> PureState:
    return ghz_state(chain(2))


def sign_state() -> PureState:
    """(|+> - |->) / sqrt(2) on a single site."""
    return PureState.normalized(chain(1), np.array([1.0, -1.0]))


def product_state(window: Window, angles: Iterable[float]) -> PureState:
    """Site k in cos(a_k/2)|+> + sin(a_k/2)|->."""
    angles = list(angles)
    if len(angles) != window.site_count:
        raise ValueError(f"need {window.site_count} angles, got {len(angles)}")
    amplitudes = np.ones(1)
    for angle in reversed(angles):
        amplitudes = np.kron(amplitudes, [np.cos(angle / 2), np.sin(angle / 2)])
    return PureState.normalized(window, amplitudes)


def random_state(window: Window, rng: np.random.Generator, real: bool = False) -> PureState:
    check_capacity("sites", window.site_count, settings.MAX_STATE_SITES)
    dim = 2**window.site_count
    amplitudes = rng.standard_normal(dim)
    if not real:
        amplitudes = amplitudes + 1j * rng.standard_normal(dim)
    return PureState.normalized(window, amplitudes)


def random_probability_table(region: Region, rng: np.random.Generator, concentration: float = 1.0) -> ProbabilityTable:
    probs = rng.dirichlet(np.full(2 ** len(region), concentration))
    return ProbabilityTable(region, probs / probs.sum())


def state_from_measure(
    p: ProbabilityTable, phases: Optional[np.ndarray] = None, rng: Optional[np.random.Generator] = None
) -> PureState:
    """sqrt(p) e^{i theta}; random phases when ``rng`` is given and ``phases`` is not."""
    if p.region != p.window.everything:
        raise ValueError("a state needs a measure on the whole window")
    if phases is None:
        phases = rng.uniform(-np.pi, np.pi, p.probs.size) if rng is not None else np.zeros(p.probs.size)
    return PureState.normalized(p.window, np.sqrt(p.probs) * np.exp(1j * phases))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = rank or dim
    factor = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    matrix = factor @ factor.conj().T
    return matrix / np.trace(matrix).real


def random_psd_pair(dim: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two PSD matrices with traces drawn uniformly from [0, 1]."""
    first = random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1))) * rng.uniform()
    second = random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1))) * rng.uniform()
    return first, second


def additive_phase(window: Window, couplings, field: float = 0.0) -> np.ndarray:
    """theta(sigma) = sum K s_u s_{u+o} + field sum s_u."""
    return classical_energy(window, couplings, field)


def gibbs_measure(spec: GibbsSpec) -> ProbabilityTable:
    window = spec.window
    check_capacity("sites", window.site_count, settings.MAX_STATE_SITES)
    couplings = [(tuple(c.offset), c.J) for c in spec.couplings]
    log_weight = spec.beta * classical_energy(window, couplings, spec.h)
    probs = np.exp(log_weight - logsumexp(log_weight))
    return ProbabilityTable(window.everything, probs / probs.sum())


def gibbs_state(spec: GibbsSpec) -> PureState:
    """Square-root Gibbs state, carrying the spec's additive phase if any."""
    measure = gibbs_measure(spec)
    phases = additive_phase(spec.window, [(tuple(c.offset), c.J) for c in spec.phase_couplings], spec.phase_field)
    return state_from_measure(measure, phases)
