import logging
import math
from typing import Optional, Sequence

import numpy as np

from entanglab.core.config import settings
from entanglab.core.errors import DegenerateStateError, RegionError
from entanglab.core.tensor import grouped, subcodes, ungrouped
from entanglab.models import (
    DensityMatrix,
    MarkovApproximation,
    Overlap,
    PhaseSplit,
    ProductApproximation,
    PureState,
    ReducedApproximation,
    Region,
    Tripartition,
)
from entanglab.physics.decorrelation import merged, phase_deficit, phase_deficit_multi, tv_conditional
from entanglab.physics.lattice import split_buffer
from entanglab.physics.states import (
    entanglement_entropy,
    fix_global_phase,
    pinch,
    probability_table,
    reduce,
    trace_distance,
    von_neumann_entropy,
)
from entanglab.schemas.report import AuditReport

logger = logging.getLogger(__name__)

PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "y": np.array([[0.0, -1j], [1j, 0.0]]),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


def _same_partition(split: PhaseSplit, tri: Tripartition) -> bool:
    return split.a == tri.a and split.b == tri.b and split.c == tri.c


def markov_state(state: PureState, tri: Tripartition, phase_split: PhaseSplit) -> MarkovApproximation:
    """psi_(B): A and C conditionally independent given sigma_B, phases alpha + gamma from the split."""
    if not tri.covers_window():
        raise RegionError("tripartition must cover the window")
    if len(phase_split.components) > 1:
        phase_split = merged(phase_split, state.local_dim)
    if not _same_partition(phase_split, tri):
        raise RegionError("phase split was computed for a different tripartition")
    nu = state.local_dim
    joint = grouped(probability_table(state).probs, state.region.sites, nu, tri.a.sites, tri.b.sites, tri.c.sites)
    joint = joint[..., 0]
    weights = joint.sum(axis=(0, 2))
    codes = np.flatnonzero(weights > settings.NULL_EVENT)
    live = weights[codes]
    vectors_a = np.sqrt(joint.sum(axis=2)[:, codes].T / live[:, None]) * np.exp(1j * phase_split.alpha[:, codes].T)
    vectors_c = np.sqrt(joint.sum(axis=0)[codes, :] / live[:, None]) * np.exp(1j * phase_split.gamma[:, codes].T)
    table = np.zeros(joint.shape, dtype=np.complex128)
    table[:, codes, :] = np.sqrt(live)[None, :, None] * vectors_a.T[:, :, None] * vectors_c[None, :, :]
    flat = ungrouped(table, state.region.sites, nu, tri.a.sites, tri.b.sites, tri.c.sites)
    norm = float(np.linalg.norm(flat))
    renormalization = abs(1.0 - norm)
    if renormalization > 1e-12:
        logger.info("markov state renormalized by %.3e", renormalization)
    return MarkovApproximation(
        tri=tri,
        codes=codes,
        weights=live / live.sum(),
        vectors_a=vectors_a,
        vectors_c=vectors_c,
        phase_split=phase_split,
        assembled=PureState.normalized(state.window, flat, nu),
        renormalization=renormalization,
    )


def reduced_state_approximation(state: PureState, a: Region, b: Region) -> ReducedApproximation:
    """Mix the leading eigenvector of each pinched member's reduction on A.

    The trace distance to rho_A is bounded by 2 sum p(sigma_B) (1 - lambda(sigma_B)).
    """
    if not a.isdisjoint(b):
        raise RegionError("regions overlap")
    ensemble = pinch(state, b)
    nu = state.local_dim
    dim_a = nu ** len(a)
    top_vectors = np.zeros((len(ensemble), dim_a), dtype=np.complex128)
    top_values = np.zeros(len(ensemble))
    assembled = np.zeros((dim_a, dim_a), dtype=np.complex128)
    for i, (weight, member) in enumerate(zip(ensemble.weights, ensemble.conditionals)):
        split = grouped(member, ensemble.rest.sites, nu, a.sites)
        values, vectors = np.linalg.eigh(split @ split.conj().T)
        top_values[i], top_vectors[i] = values[-1], vectors[:, -1]
        assembled += weight * np.outer(vectors[:, -1], vectors[:, -1].conj())
    approximation = DensityMatrix(a, assembled, nu)
    tri = Tripartition(a, b, (a | b).complement())
    return ReducedApproximation(
        tri=tri,
        codes=ensemble.codes,
        weights=ensemble.weights,
        top_vectors=top_vectors,
        top_eigenvalues=top_values,
        assembled=approximation,
        bound=float(2.0 * ensemble.weights @ (1.0 - top_values)),
        distance=trace_distance(reduce(state, a), approximation),
    )


def overlap_and_fidelity(psi: PureState, approx: MarkovApproximation) -> Overlap:
    """<psi|psi_(B)> for the phase-fixed psi, and the trace-distance bound it implies on A."""
    if psi.window != approx.assembled.window:
        raise RegionError("states live on different windows")
    fixed = fix_global_phase(psi)
    value = complex(np.vdot(fixed.amplitudes, approx.assembled.amplitudes))
    distance = trace_distance(reduce(fixed, approx.tri.a), reduce(approx.assembled, approx.tri.a))
    return Overlap(value=value, distance=distance, bound=2.0 * math.sqrt(max(2.0 * (1.0 - value.real), 0.0)))


def _refuse_degenerate(degenerate: bool, allow_degenerate: bool) -> None:
    if degenerate and not allow_degenerate:
        raise DegenerateStateError("state is flagged degenerate; rerun with accept_degenerate to audit it anyway")


def fidelity_bound_audit(
    state: PureState,
    tri: Tripartition,
    phase_split: Optional[PhaseSplit] = None,
    degenerate: bool = False,
    allow_degenerate: bool = False,
) -> list[AuditReport]:
    """[1/2 |rho_A - rho_A(psi_B)|_1]^2 <= 2|1 - <psi|psi_B>| <= 2 delta_B(A|C) + 2 vartheta.

    vartheta is the objective of the split actually used to build psi_B.
    """
    _refuse_degenerate(degenerate, allow_degenerate)
    split = phase_split or phase_deficit(state, tri)
    approx = markov_state(state, tri, split)
    overlap = overlap_and_fidelity(state, approx)
    delta = tv_conditional(probability_table(state), tri.a, tri.b, tri.c).value
    gap = 2.0 * abs(1.0 - overlap.value)
    inputs = {**tri.describe(), "vartheta": split.objective, "delta": delta}
    return [
        AuditReport.build("fidelity_trace", (0.5 * overlap.distance) ** 2, gap, inputs),
        AuditReport.build("fidelity_overlap", gap, 2.0 * delta + 2.0 * split.objective, inputs),
    ]


def approximation_rank_audit(approx: MarkovApproximation) -> list[AuditReport]:
    """rank rho_A(psi_B) <= nu^|B| and S(rho_A(psi_B)) <= |B| ln nu."""
    nu = approx.assembled.local_dim
    rho = reduce(approx.assembled, approx.tri.a)
    inputs = approx.tri.describe()
    size = len(approx.tri.b)
    return [
        AuditReport.build("markov_rank", rho.rank, nu**size, inputs, slack=0.0),
        AuditReport.build("markov_schmidt", von_neumann_entropy(rho), size * math.log(nu), inputs),
    ]


def mutual_information(state: PureState, a1: Region, a2: Region) -> float:
    """S(A1) + S(A2) - S(A1 u A2) in nats."""
    if not a1.isdisjoint(a2):
        raise RegionError("regions overlap")
    return (
        entanglement_entropy(state, a1) + entanglement_entropy(state, a2) - entanglement_entropy(state, a1 | a2)
    )


def site_observable(region: Region, site: int, axis: str) -> np.ndarray:
    """Pauli operator on ``site``, identity on the rest of ``region``, in the region's code order."""
    if site not in region:
        raise RegionError(f"site {site} is not in the region")
    operator = np.ones((1, 1))
    for s in reversed(region.sites):
        operator = np.kron(operator, PAULI[axis] if s == site else np.eye(2))
    return operator


def pinsker_audit(state: PureState, a1: Region, a2: Region, o1: np.ndarray, o2: np.ndarray) -> AuditReport:
    """|<O1 O2> - <O1><O2>| <= |O1| |O2| sqrt(2 I(A1:A2)) with I in nats."""
    if not a1.isdisjoint(a2):
        raise RegionError("regions overlap")
    nu = state.local_dim
    for region, operator in ((a1, o1), (a2, o2)):
        if operator.shape != (nu ** len(region),) * 2:
            raise RegionError(f"observable of shape {operator.shape} is not supported on {len(region)} sites")
    split = grouped(state.amplitudes, state.region.sites, nu, a1.sites, a2.sites)
    both = np.einsum("ijr,ik,jl,klr->", split.conj(), o1, o2, split)
    first = np.einsum("ijr,ik,kjr->", split.conj(), o1, split)
    second = np.einsum("ijr,jl,ilr->", split.conj(), o2, split)
    lhs = abs(both - first * second)
    norms = np.abs(np.linalg.eigvalsh(o1)).max() * np.abs(np.linalg.eigvalsh(o2)).max()
    information = max(mutual_information(state, a1, a2), 0.0)
    return AuditReport.build(
        "pinsker",
        lhs,
        norms * math.sqrt(2.0 * information),
        {"a1": list(a1.sites), "a2": list(a2.sites), "mutual_information": information},
    )


def product_markov_state(
    state: PureState, a1: Region, a2: Region, l: int, split: Optional[PhaseSplit] = None
) -> ProductApproximation:
    """psi^(12) with weight p(C|B) p(B1) p(A1|B1) p(B2) p(A2|B2) and the two-component phases.

    Its reduction on A1 u A2 is a product state whenever p(sigma_B) > 0 for every sigma_B.
    """
    b1, b2, c = split_buffer(a1, a2, l)
    split = split or phase_deficit_multi(state, [(a1, b1), (a2, b2)], c)
    nu = state.local_dim
    groups = (a1.sites, b1.sites, a2.sites, b2.sites, c.sites)
    joint = grouped(probability_table(state).probs, state.region.sites, nu, *groups)[..., 0]
    p_b = joint.sum(axis=(0, 2, 4))
    given_b = joint.sum(axis=(0, 2)) / np.where(p_b > settings.NULL_EVENT, p_b, np.inf)[:, :, None]
    p_a1b1 = joint.sum(axis=(2, 3, 4))
    p_a2b2 = joint.sum(axis=(0, 1, 4))
    weight = given_b[None, :, None, :, :] * p_a1b1[:, :, None, None, None] * p_a2b2[None, None, :, :, None]

    first, second = split.components
    b_codes = np.arange(nu ** len(split.b))
    gamma = np.zeros((nu ** len(b1), nu ** len(b2), nu ** len(c)))
    rows = subcodes(b_codes, split.b.sites, b1.sites, nu)
    columns = subcodes(b_codes, split.b.sites, b2.sites, nu)
    gamma[rows, columns] = split.gamma.T
    phase = (
        first.alpha[:, :, None, None, None]
        + second.alpha[None, None, :, :, None]
        + gamma[None, :, None, :, :]
    )
    table = np.sqrt(weight) * np.exp(1j * phase)
    flat = ungrouped(table, state.region.sites, nu, *groups)
    assembled = PureState.normalized(state.window, flat, nu)
    return ProductApproximation(a1=a1, a2=a2, b1=b1, b2=b2, c=c, assembled=assembled)


def decoupled_fidelity_audit(state: PureState, a1: Region, a2: Region, l: int) -> AuditReport:
    """1 - Re<psi^(12)|psi_(B)> <= delta(A1 u B1 | A2 u B2), both built from one two-component split."""
    b1, b2, c = split_buffer(a1, a2, l)
    split = phase_deficit_multi(state, [(a1, b1), (a2, b2)], c)
    product = product_markov_state(state, a1, a2, l, split)
    tri = Tripartition(a1 | a2, b1 | b2, c)
    markov = markov_state(state, tri, split)
    overlap = complex(np.vdot(product.assembled.amplitudes, markov.assembled.amplitudes))
    empty = Region(state.window)
    rhs = tv_conditional(probability_table(state), a1 | b1, empty, a2 | b2).value
    inputs = {"a1": list(a1.sites), "a2": list(a2.sites), "b1": list(b1.sites), "b2": list(b2.sites), "l": l}
    return AuditReport.build("decoupled_fidelity", 1.0 - overlap.real, rhs, inputs)
