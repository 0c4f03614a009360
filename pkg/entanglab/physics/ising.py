import itertools
import logging
from typing import Optional, Union

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from entanglab.core.config import settings
from entanglab.core.errors import ConvergenceError, RegionError, check_capacity
from entanglab.models import GroundStateResult, Hamiltonian, ProbabilityTable, PureState, Region, Window
from entanglab.models import SpinConfiguration
from entanglab.physics.states import conditional, fix_global_phase, joint_table, probability_table
from entanglab.schemas.model import IsingSpec
from entanglab.schemas.report import AuditReport, StoquasticityReport

logger = logging.getLogger(__name__)

SPIN = np.array([1.0, -1.0])

Measure = Union[PureState, ProbabilityTable]


def site_spins(index: np.ndarray, site: int) -> np.ndarray:
    """z-spin of ``site`` in each basis configuration of ``index``."""
    return 1.0 - 2.0 * ((index >> site) & 1)


def bond_pairs(window: Window, offset: tuple[int, ...]) -> list[tuple[int, int]]:
    """Pairs (u, u + offset) with both ends inside the window."""
    if len(offset) != window.dimension:
        raise RegionError(f"offset {list(offset)} does not match window dimension {window.dimension}")
    coords = window.coordinates
    shifted = coords + np.asarray(offset)
    inside = np.all((shifted >= 0) & (shifted < np.asarray(window.dims)), axis=1)
    return [
        (int(u), int(np.ravel_multi_index(tuple(shifted[u]), window.dims))) for u in np.flatnonzero(inside)
    ]


def outer_boundary(window: Window) -> list[int]:
    """Sites of the window with fewer than 2d nearest neighbors."""
    return [u for u in range(window.site_count) if len(window.neighbors(u)) < 2 * window.dimension]


def classical_energy(window: Window, couplings, field: float = 0.0, boundary_field: float = 0.0) -> np.ndarray:
    """sum J s_u s_{u+o} + h sum s_u (+ boundary field on outer sites) for every configuration."""
    edge = set(outer_boundary(window)) if boundary_field else set()
    index = np.arange(2**window.site_count, dtype=np.int64)
    energy = np.zeros(index.size)
    for offset, strength in couplings:
        for u, v in bond_pairs(window, tuple(offset)):
            energy += strength * site_spins(index, u) * site_spins(index, v)
    for u in range(window.site_count):
        local = field + (boundary_field if u in edge else 0.0)
        if local:
            energy += local * site_spins(index, u)
    return energy


def build_hamiltonian(spec: IsingSpec, threads: Optional[int] = None) -> Hamiltonian:
    window = spec.window
    check_capacity("sites", window.site_count, settings.MAX_STATE_SITES)
    couplings = [(tuple(c.offset), c.J) for c in spec.couplings]
    diagonal = -classical_energy(window, couplings, spec.hz, spec.boundary_hz)
    logger.debug("built Ising Hamiltonian on %d sites (b=%g)", window.site_count, spec.b)
    return Hamiltonian(window, diagonal, float(spec.b), threads or settings.THREADS)


def _degenerate(gap: float) -> bool:
    return gap < settings.DEGENERACY_GAP


def ground_state(h: Hamiltonian) -> GroundStateResult:
    """Lowest eigenpair with the amplitudes made real and nonnegative where possible.

    Classical operators (b = 0) are solved by sorting the diagonal, small ones by dense
    diagonalization, everything else by Lanczos iteration on the sparse operator.
    """
    dim = h.dimension
    if h.b == 0.0:
        order = np.argsort(h.diagonal, kind="stable")
        energies = h.diagonal[order[:2]]
        vector = np.zeros(dim)
        vector[order[0]] = 1.0
        iterations, solver = 0, "classical"
    elif h.site_count <= settings.DENSE_SOLVER_SITES:
        energies, vectors = linalg.eigh(h.to_dense(), subset_by_index=[0, 1])
        vector = vectors[:, 0]
        iterations, solver = 1, "dense"
    else:
        calls = [0]

        def counted(v):
            calls[0] += 1
            return h.matvec(v)

        operator = LinearOperator((dim, dim), matvec=counted, dtype=np.float64)
        try:
            energies, vectors = eigsh(
                operator,
                k=2,
                which="SA",
                v0=np.linspace(1.0, 2.0, dim),
                tol=0.0,
                maxiter=settings.SOLVER_MAX_ITERATIONS,
            )
        except ArpackNoConvergence as exc:
            raise ConvergenceError(f"Lanczos did not converge on {h.site_count} sites: {exc}") from exc
        order = np.argsort(energies)
        energies, vector = energies[order], vectors[:, order[0]]
        iterations, solver = calls[0], "lanczos"

    energy = float(energies[0])
    state = fix_global_phase(PureState.normalized(h.window, vector))
    residual = float(np.linalg.norm(h.matvec(state.amplitudes) - energy * state.amplitudes))
    if residual > settings.SOLVER_RESIDUAL:
        raise ConvergenceError(f"ground state residual {residual:.3g} exceeds {settings.SOLVER_RESIDUAL:g}")
    gap = float(energies[1] - energies[0]) if len(energies) > 1 else float("inf")
    degenerate = _degenerate(gap)
    if degenerate:
        logger.warning("ground state is degenerate within %.1e (gap %.3g)", settings.DEGENERACY_GAP, gap)
    logger.debug("%s solver: E0=%.12f gap=%.3g residual=%.2e iterations=%d", solver, energy, gap, residual, iterations)
    return GroundStateResult(
        energy=energy,
        state=state,
        gap=gap,
        iterations=iterations,
        residual=residual,
        degenerate=degenerate,
        solver=solver,
        excited_energy=float(energies[1]) if len(energies) > 1 else None,
    )


def _flip_expectation(psi: PureState, mask: int) -> float:
    amplitudes = psi.amplitudes
    index = np.arange(amplitudes.size)
    return float(np.vdot(amplitudes, amplitudes[index ^ mask]).real)


def _z_moments(p: ProbabilityTable, u: int, v: int) -> tuple[float, float, float]:
    if u == v:
        single = joint_table(p, Region(p.window, (u,)))
        mean = float(single @ SPIN)
        return 1.0, mean, mean
    table = joint_table(p, Region(p.window, (u,)), Region(p.window, (v,)))
    return float(SPIN @ table @ SPIN), float(table.sum(axis=1) @ SPIN), float(table.sum(axis=0) @ SPIN)


def _measure(state: Measure) -> ProbabilityTable:
    return probability_table(state) if isinstance(state, PureState) else state


def correlator(state: Measure, u: int, v: int, axis: str = "z", truncated: bool = False) -> float:
    """<S^a_u S^a_v>, minus <S^a_u><S^a_v> when truncated, with Pauli spin operators."""
    if axis == "z":
        both, mean_u, mean_v = _z_moments(_measure(state), u, v)
    elif axis == "x":
        if not isinstance(state, PureState):
            raise ValueError("x correlations need a pure state")
        both = 1.0 if u == v else _flip_expectation(state, (1 << u) | (1 << v))
        mean_u, mean_v = _flip_expectation(state, 1 << u), _flip_expectation(state, 1 << v)
    else:
        raise ValueError(f"unknown spin axis {axis!r}")
    return both - mean_u * mean_v if truncated else both


def conditional_correlator(state: Measure, u: int, v: int, given: SpinConfiguration) -> float:
    """Truncated z covariance of sites u and v under p( . | sigma_D)."""
    if u in given.region or v in given.region:
        raise RegionError("correlated sites must lie outside the conditioning region")
    p = _measure(state)
    target = Region(p.window, tuple({u, v}))
    return correlator(conditional(p, target, given), u, v, truncated=True)


def conditional_covariances(p: ProbabilityTable, u: int, v: int, domain: Region) -> tuple[np.ndarray, np.ndarray]:
    """Truncated covariance of (u, v) for every sigma_D, with the weights p(sigma_D).

    Configurations of zero weight get covariance 0.
    """
    window = p.window
    table = joint_table(p, Region(window, (u,)), Region(window, (v,)), domain)
    weights = table.sum(axis=(0, 1))
    live = weights > settings.NULL_EVENT
    safe = np.where(live, weights, 1.0)
    both = np.einsum("a,abd,b->d", SPIN, table, SPIN) / safe
    mean_u = np.einsum("a,abd->d", SPIN, table) / safe
    mean_v = np.einsum("abd,b->d", table, SPIN) / safe
    return np.where(live, both - mean_u * mean_v, 0.0), weights


def stoquastic_check(state: PureState) -> StoquasticityReport:
    fixed = fix_global_phase(state)
    real = fixed.amplitudes.real
    imaginary = np.abs(fixed.amplitudes.imag).max()
    most_negative = float(min(real.min(), 0.0))
    return StoquasticityReport(
        stoquastic=bool(most_negative >= -1e-12 and imaginary <= 1e-12),
        max_negative_amplitude=most_negative,
        max_imaginary_part=float(imaginary),
    )


def dss_audit(state: Measure, max_domain: int, pairs: Optional[list[tuple[int, int]]] = None) -> AuditReport:
    """Conditional truncated correlations never exceed the plain two-point function.

    Enumerates every domain D of at most ``max_domain`` sites away from (u, v) and every sigma_D.
    """
    p = _measure(state)
    window = p.window
    sites = range(window.site_count)
    pairs = pairs or list(itertools.combinations(sites, 2))
    worst = None
    instances = 0
    for u, v in pairs:
        bound = correlator(p, u, v)
        others = [s for s in sites if s not in (u, v)]
        for size in range(max_domain + 1):
            for domain_sites in itertools.combinations(others, size):
                covariances, weights = conditional_covariances(p, u, v, Region(window, domain_sites))
                live = weights > settings.NULL_EVENT
                instances += int(live.sum())
                value = float(covariances[live].max())
                if worst is None or bound - value < worst[1] - worst[0]:
                    worst = (value, bound, u, v, domain_sites)
    value, bound, u, v, domain_sites = worst
    report = AuditReport.build(
        "dss",
        lhs=value,
        rhs=bound,
        inputs={"u": u, "v": v, "domain": list(domain_sites), "max_domain": max_domain, "instances": instances},
    )
    if not report.passed:
        logger.warning("DSS inequality fails at u=%d v=%d D=%s: %.3g > %.3g", u, v, domain_sites, value, bound)
    return report
