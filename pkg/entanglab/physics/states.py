import logging

import numpy as np
from scipy import special

from entanglab.core.config import settings
from entanglab.core.errors import NullEventError, RegionError
from entanglab.core.tensor import grouped
from entanglab.models import DensityMatrix, PhaseTable, PinchedEnsemble, ProbabilityTable, PureState, Region
from entanglab.models import SpinConfiguration

logger = logging.getLogger(__name__)


def fix_global_phase(psi: PureState) -> PureState:
    """Rotate the state so that its largest-modulus amplitude is real positive."""
    amplitudes = psi.amplitudes
    pivot = amplitudes[np.argmax(np.abs(amplitudes))]
    rotated = amplitudes * (np.conj(pivot) / abs(pivot))
    rotated[np.argmax(np.abs(amplitudes))] = abs(pivot)
    return PureState(psi.window, rotated, psi.local_dim)


def probability_table(psi: PureState) -> ProbabilityTable:
    """z-basis measure p(sigma) = |psi(sigma)|^2 on the whole window."""
    probs = np.abs(psi.amplitudes) ** 2
    return ProbabilityTable(psi.region, probs / probs.sum(), psi.local_dim)


def amplitude_decompose(psi: PureState) -> tuple[ProbabilityTable, PhaseTable]:
    """Split a state into its measure p and its phase function theta."""
    fixed = fix_global_phase(psi)
    moduli = np.abs(fixed.amplitudes)
    defined = moduli > settings.ZERO_AMPLITUDE
    theta = np.angle(fixed.amplitudes)
    theta = np.where(theta <= -np.pi, np.pi, theta)
    return probability_table(fixed), PhaseTable(psi.region, theta, defined)


def _check_subregion(inner: Region, outer: Region) -> None:
    if not inner <= outer:
        raise RegionError(f"sites {sorted(set(inner.sites) - set(outer.sites))} are not in the table's region")


def marginal(p: ProbabilityTable, s: Region) -> ProbabilityTable:
    _check_subregion(s, p.region)
    table = grouped(p.probs, p.region.sites, p.local_dim, s.sites).sum(axis=1)
    return ProbabilityTable(s, table / table.sum(), p.local_dim)


def joint_table(p: ProbabilityTable, *regions: Region) -> np.ndarray:
    """Marginal of ``p`` as an array with one axis per region (codes in each region's order)."""
    for region in regions:
        _check_subregion(region, p.region)
    return grouped(p.probs, p.region.sites, p.local_dim, *(r.sites for r in regions)).sum(axis=-1)


def conditional(p: ProbabilityTable, target: Region, given: SpinConfiguration) -> ProbabilityTable:
    if not target.isdisjoint(given.region):
        raise RegionError("target and conditioning regions overlap")
    joint = joint_table(p, target, given.region)[:, given.code]
    weight = joint.sum()
    if weight <= settings.NULL_EVENT:
        raise NullEventError()
    return ProbabilityTable(target, joint / weight, p.local_dim)


def reduce(psi: PureState, a: Region) -> DensityMatrix:
    """Partial trace of |psi><psi| over the complement of ``a``."""
    if a.window != psi.window:
        raise RegionError("region belongs to a different window")
    split = grouped(psi.amplitudes, psi.region.sites, psi.local_dim, a.sites)
    return DensityMatrix(a, split @ split.conj().T, psi.local_dim)


def schmidt_coefficients(psi: PureState, a: Region) -> np.ndarray:
    """Squared Schmidt coefficients across (a, complement), in decreasing order."""
    split = grouped(psi.amplitudes, psi.region.sites, psi.local_dim, a.sites)
    return np.linalg.svd(split, compute_uv=False) ** 2


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-tr rho ln rho in nats."""
    return float(special.entr(rho.spectrum).sum())


def renyi_entropy(rho: DensityMatrix, alpha: float) -> float:
    if alpha <= 0 or alpha == 1:
        raise ValueError(f"Renyi order must be positive and different from 1, got {alpha}")
    spectrum = rho.spectrum[rho.spectrum > 0]
    return float(np.log(np.sum(spectrum**alpha)) / (1.0 - alpha))


def entanglement_entropy(psi: PureState, a: Region) -> float:
    return float(special.entr(schmidt_coefficients(psi, a)).sum())


def spectral_tail(rho: DensityMatrix, n: int) -> float:
    """Mass of the spectrum beyond the ``n`` largest eigenvalues."""
    if n < 0:
        raise ValueError(f"tail index must be nonnegative, got {n}")
    if n == 0:
        return 1.0
    return float(rho.spectrum[n:].sum())


def trace_distance(r1: DensityMatrix, r2: DensityMatrix) -> float:
    if r1.region != r2.region or r1.local_dim != r2.local_dim:
        raise RegionError("density matrices live on different regions")
    return float(np.abs(np.linalg.eigvalsh(r1.matrix - r2.matrix)).sum())


def expectation(psi: PureState, a: Region, operator: np.ndarray) -> complex:
    """<psi| O (x) 1 |psi> for an operator O on the sites of ``a`` (codes in a's site order)."""
    return complex(np.trace(reduce(psi, a).matrix @ operator))


def pinch(psi: PureState, b: Region) -> PinchedEnsemble:
    """Ensemble of post-measurement states of the buffer ``b``; null outcomes are dropped."""
    if b.window != psi.window:
        raise RegionError("buffer belongs to a different window")
    split = grouped(psi.amplitudes, psi.region.sites, psi.local_dim, b.sites)
    weights = np.sum(np.abs(split) ** 2, axis=1)
    codes = np.flatnonzero(weights > settings.NULL_EVENT)
    if codes.size < weights.size:
        logger.debug("pinch: dropped %d null buffer outcomes", weights.size - codes.size)
    conditionals = split[codes] / np.sqrt(weights[codes])[:, None]
    return PinchedEnsemble(
        state_window=psi.window,
        buffer=b,
        rest=b.complement(),
        codes=codes,
        weights=weights[codes] / weights[codes].sum(),
        conditionals=conditionals,
        local_dim=psi.local_dim,
    )


def pinched_reduction(ensemble: PinchedEnsemble, a: Region) -> DensityMatrix:
    """sum_b p(b) rho_A(psi(b)) for a region disjoint from the buffer."""
    if not a.isdisjoint(ensemble.buffer):
        raise RegionError("region overlaps the pinched buffer")
    dim_a = ensemble.local_dim ** len(a)
    total = np.zeros((dim_a, dim_a), dtype=np.complex128)
    for weight, vector in zip(ensemble.weights, ensemble.conditionals):
        split = grouped(vector, ensemble.rest.sites, ensemble.local_dim, a.sites)
        total += weight * (split @ split.conj().T)
    return DensityMatrix(a, total, ensemble.local_dim)
