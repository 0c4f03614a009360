"""Brute-force cross-checks for windows of at most MAX_ORACLE_SITES sites.

Every oracle recomputes a quantity by direct enumeration and reports the discrepancy
with the production routine as an audit ``|difference| <= 0``.
"""

import itertools
import logging
import math

import numpy as np

from entanglab.core.config import settings
from entanglab.core.errors import check_capacity
from entanglab.models import ProbabilityTable, PureState, Region, Tripartition, Window
from entanglab.physics.approximation import PAULI
from entanglab.physics.decorrelation import phase_deficit, phase_grid_oracle, tv_conditional
from entanglab.physics.ising import bond_pairs, build_hamiltonian, ground_state, outer_boundary
from entanglab.physics.lattice import boundary, buffer
from entanglab.physics.states import reduce
from entanglab.schemas.model import IsingSpec
from entanglab.schemas.report import AuditReport

logger = logging.getLogger(__name__)

ORACLE_SLACK = 1e-9


def _check_window(window: Window) -> None:
    check_capacity("sites", window.site_count, settings.MAX_ORACLE_SITES)


def _discrepancy(name: str, difference: float, inputs: dict) -> AuditReport:
    return AuditReport.build(name, abs(difference), 0.0, inputs, slack=ORACLE_SLACK)


def _site_operator(n: int, site: int, pauli: np.ndarray) -> np.ndarray:
    # Kronecker order puts site 0 last so that it is the least significant digit
    operator = np.ones((1, 1))
    for s in reversed(range(n)):
        operator = np.kron(operator, pauli if s == site else np.eye(2))
    return operator


def kron_hamiltonian(spec: IsingSpec) -> np.ndarray:
    """-sum J Z_u Z_v - hz sum Z_u - boundary_hz sum_edge Z_u - b sum X_u from Kronecker products."""
    window = spec.window
    _check_window(window)
    n = window.site_count
    z = [_site_operator(n, s, PAULI["z"]) for s in range(n)]
    x = [_site_operator(n, s, PAULI["x"]) for s in range(n)]
    matrix = np.zeros((2**n, 2**n))
    for coupling in spec.couplings:
        for u, v in bond_pairs(window, tuple(coupling.offset)):
            matrix -= coupling.J * z[u] @ z[v]
    edge = set(outer_boundary(window))
    for s in range(n):
        matrix -= (spec.hz + (spec.boundary_hz if s in edge else 0.0)) * z[s]
        matrix -= spec.b * x[s]
    return matrix


def hamiltonian_oracle(spec: IsingSpec) -> list[AuditReport]:
    """Compare the bitmask operator and its ground energy with the Kronecker construction."""
    dense = kron_hamiltonian(spec)
    h = build_hamiltonian(spec)
    inputs = {"dims": list(spec.window.dims), "b": spec.b}
    energy = float(np.linalg.eigvalsh(dense)[0])
    return [
        _discrepancy("oracle_hamiltonian", float(np.abs(dense - h.to_dense()).max()), inputs),
        _discrepancy("oracle_ground_energy", energy - ground_state(h).energy, {**inputs, "energy": energy}),
    ]


def _configurations(window: Window):
    return itertools.product(range(2), repeat=window.site_count)


def _code(labels, sites) -> int:
    return sum(labels[s] << k for k, s in enumerate(sites))


def reduce_oracle(state: PureState, a: Region) -> AuditReport:
    """rho_A by the double sum over configurations agreeing outside A."""
    _check_window(state.window)
    rest = a.complement()
    rho = np.zeros((2 ** len(a),) * 2, dtype=np.complex128)
    for left in _configurations(state.window):
        for right in _configurations(state.window):
            if any(left[s] != right[s] for s in rest):
                continue
            amplitude_left = state.amplitudes[_code(left, range(state.window.site_count))]
            amplitude_right = state.amplitudes[_code(right, range(state.window.site_count))]
            rho[_code(left, a.sites), _code(right, a.sites)] += amplitude_left * np.conj(amplitude_right)
    difference = float(np.abs(rho - reduce(state, a).matrix).max())
    return _discrepancy("oracle_reduce", difference, {"a": list(a.sites)})


def tv_oracle(p: ProbabilityTable, tri: Tripartition) -> AuditReport:
    """delta_B(A|C) as half the l1 distance between p(A, B, C) and p(A, B) p(B, C) / p(B)."""
    window = p.window
    _check_window(window)
    marginals: dict[str, dict[tuple, float]] = {"ab": {}, "bc": {}, "b": {}, "abc": {}}
    for values in itertools.product(range(2), repeat=len(p.region)):
        labels = dict(zip(p.region.sites, values))
        weight = p.probs[_code(labels, p.region.sites)]
        keys = {
            "ab": tuple(labels[s] for s in tri.a.sites + tri.b.sites),
            "bc": tuple(labels[s] for s in tri.b.sites + tri.c.sites),
            "b": tuple(labels[s] for s in tri.b.sites),
            "abc": tuple(labels[s] for s in tri.a.sites + tri.b.sites + tri.c.sites),
        }
        for name, key in keys.items():
            marginals[name][key] = marginals[name].get(key, 0.0) + weight
    total = 0.0
    na, nb = len(tri.a), len(tri.b)
    for key_a in itertools.product(range(2), repeat=na):
        for key_b in itertools.product(range(2), repeat=nb):
            weight_b = marginals["b"].get(key_b, 0.0)
            if weight_b <= settings.NULL_EVENT:
                continue
            for key_c in itertools.product(range(2), repeat=len(tri.c)):
                joint = marginals["abc"].get(key_a + key_b + key_c, 0.0)
                product = marginals["ab"].get(key_a + key_b, 0.0) * marginals["bc"].get(key_b + key_c, 0.0)
                total += abs(joint - product / weight_b)
    value = tv_conditional(p, tri.a, tri.b, tri.c).value
    return _discrepancy("oracle_tv", 0.5 * total - value, {**tri.describe(), "delta": value})


def boundary_oracle(a: Region) -> AuditReport:
    """Boundary sites by scanning every coordinate pair at distance one."""
    window = a.window
    coords = [window.coords(u) for u in range(window.site_count)]
    scanned = {
        u
        for u in a
        for v in range(window.site_count)
        if v not in a and sum(abs(x - y) for x, y in zip(coords[u], coords[v])) == 1
    }
    mismatch = len(scanned.symmetric_difference(boundary(a).sites))
    return _discrepancy("oracle_boundary", mismatch, {"a": list(a.sites), "boundary_size": len(scanned)})


def buffer_oracle(a: Region, l: int) -> AuditReport:
    """Buffer sites by an exhaustive distance scan."""
    window = a.window
    coords = [window.coords(u) for u in range(window.site_count)]
    scanned = {
        v
        for v in range(window.site_count)
        if v not in a and min(sum(abs(x - y) for x, y in zip(coords[u], coords[v])) for u in a) <= l
    }
    mismatch = len(scanned.symmetric_difference(buffer(a, l).b.sites))
    return _discrepancy("oracle_buffer", mismatch, {"a": list(a.sites), "l": l, "buffer_size": len(scanned)})


def phase_oracle(state: PureState, tri: Tripartition, steps: int = 64) -> list[AuditReport]:
    """Alternating optimizer against the exhaustive grid, and the grid-seeded polish against the grid."""
    _check_window(state.window)
    grid = phase_grid_oracle(state, tri, steps)
    alternating = phase_deficit(state, tri)
    polished = phase_deficit(state, tri, initial=grid)
    resolution = 2.0 * math.pi / steps
    inputs = {**tri.describe(), "steps": steps, "grid": grid.objective}
    logger.debug(
        "phase oracle: alternating %.3e grid %.3e polished %.3e",
        alternating.objective,
        grid.objective,
        polished.objective,
    )
    return [
        AuditReport.build("oracle_phase_optimizer", alternating.objective, grid.objective + resolution, inputs),
        AuditReport.build("oracle_phase_polish", polished.objective, grid.objective, inputs),
    ]
