"""Total-variation decorrelation functionals, the phase deficit and FKG-type bounds."""

import itertools
import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np

from entanglab.core.config import settings
from entanglab.core.errors import CapacityError, RegionError, check_capacity
from entanglab.core.tensor import config_codes, grouped, subcodes
from entanglab.models import PhaseComponent, PhaseSplit, ProbabilityTable, PureState, Region, Tripartition
from entanglab.physics.ising import conditional_covariances
from entanglab.physics.states import amplitude_decompose, joint_table
from entanglab.schemas.report import AuditReport, TvReport

logger = logging.getLogger(__name__)

FKG_KAPPA = 0.5
FKG_KAPPA_LITERAL = 0.25
MAX_GRID_POINTS = 1 << 18


def _check_disjoint(*regions: Region) -> None:
    for first, second in itertools.combinations(regions, 2):
        if not first.isdisjoint(second):
            raise RegionError("regions overlap")


def tv(p: ProbabilityTable, a: Region, c: Region) -> TvReport:
    """TV(A|C): half the l1 distance between p(A, C) and p(A) p(C)."""
    _check_disjoint(a, c)
    joint = joint_table(p, a, c)
    product = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    return TvReport(value=float(0.5 * np.abs(joint - product).sum()), a=list(a.sites), c=list(c.sites))


def tv_conditional(p: ProbabilityTable, a: Region, b: Region, c: Region) -> TvReport:
    """delta_B(A|C) = sum_{sigma_B} p(sigma_B) TV_{sigma_B}(A|C); null sigma_B contribute nothing."""
    _check_disjoint(a, b, c)
    joint = joint_table(p, a, b, c)
    weights = joint.sum(axis=(0, 2))
    live = weights > settings.NULL_EVENT
    safe = np.where(live, weights, 1.0)
    independent = joint.sum(axis=2)[:, :, None] * joint.sum(axis=0)[None, :, :] / safe[None, :, None]
    excess = np.clip(joint - independent, 0.0, None).sum(axis=(0, 2))
    excess = np.where(live, excess, 0.0)
    parts = np.where(live, excess / safe, 0.0)
    return TvReport(
        value=float(excess.sum()),
        a=list(a.sites),
        b=list(b.sites),
        c=list(c.sites),
        weights=weights.tolist(),
        parts=parts.tolist(),
    )


def single_flip_tv(p: ProbabilityTable, a: Region, b: Region, u: int) -> float:
    """Buffer-averaged influence on A of re-drawing the spin at u.

    sum_B p(B) sum_{s, t} p(s|B) p(t|B) TV(p(A|B, s), p(A|B, t)).
    """
    site = Region(p.window, (u,))
    _check_disjoint(a, b, site)
    joint = joint_table(p, a, b, site)
    weights_bu = joint.sum(axis=0)
    live = weights_bu > settings.NULL_EVENT
    cond_a = joint / np.where(live, weights_bu, 1.0)[None, :, :]
    weights_b = weights_bu.sum(axis=1)
    cond_u = np.where(live, weights_bu, 0.0) / np.where(weights_b > settings.NULL_EVENT, weights_b, 1.0)[:, None]
    distance = 0.5 * np.abs(cond_a[:, :, :, None] - cond_a[:, :, None, :]).sum(axis=0)
    pair_weights = cond_u[:, :, None] * cond_u[:, None, :]
    return float(np.einsum("b,bst,bst->", weights_b, pair_weights, distance))


def single_flip_audit(p: ProbabilityTable, a: Region, b: Region, u: int) -> AuditReport:
    site = Region(p.window, (u,))
    return AuditReport.build(
        "single_flip",
        lhs=tv_conditional(p, a, b, site).value,
        rhs=single_flip_tv(p, a, b, u),
        inputs={"a": list(a.sites), "b": list(b.sites), "u": u},
    )


class _PhaseProblem:
    """Weighted phase-matching objective sum_sigma p |1 - exp(i(sum alpha_j + gamma - theta))|^2."""

    def __init__(self, state: PureState, components: Sequence[tuple[Region, Region]], c: Region):
        p, phases = amplitude_decompose(state)
        nu = state.local_dim
        sites = state.region.sites
        self.sites, self.nu = sites, nu
        self.components = list(components)
        self.c = c
        self.b = Region(state.window, tuple(s for _, b in components for s in b.sites))
        self.p = p.probs
        self.theta = phases.phases
        self.weighted = self.p * np.exp(1j * self.theta)
        self.dim_b = nu ** len(self.b)
        self.dim_c = nu ** len(c)
        code_b = config_codes(sites, nu, self.b.sites)
        self.key_c = config_codes(sites, nu, c.sites) * self.dim_b + code_b
        self.keys, self.shapes = [], []
        for a_j, b_j in self.components:
            dim_bj = nu ** len(b_j)
            self.keys.append(config_codes(sites, nu, a_j.sites) * dim_bj + config_codes(sites, nu, b_j.sites))
            self.shapes.append((nu ** len(a_j), dim_bj))

    def total_phase(self, alphas: Sequence[np.ndarray], gamma: np.ndarray, skip: Optional[int] = None) -> np.ndarray:
        phase = np.zeros_like(self.p) if gamma is None else gamma.reshape(-1)[self.key_c]
        for j, (alpha, key) in enumerate(zip(alphas, self.keys)):
            if j != skip:
                phase = phase + alpha.reshape(-1)[key]
        return phase

    def objective(self, alphas: Sequence[np.ndarray], gamma: np.ndarray) -> float:
        mismatch = self.total_phase(alphas, gamma) - self.theta
        value = np.sum(self.p * np.abs(1.0 - np.exp(1j * mismatch)) ** 2)
        return math.sqrt(max(float(value), 0.0))

    def circular_mean(self, key: np.ndarray, size: int, other: np.ndarray) -> np.ndarray:
        """Arg sum p e^{i(theta - other)} grouped by ``key``."""
        terms = self.weighted * np.exp(-1j * other)
        total = np.bincount(key, weights=terms.real, minlength=size) + 1j * np.bincount(
            key, weights=terms.imag, minlength=size
        )
        return np.angle(total)

    def theta_table(self, *regions: Region) -> np.ndarray:
        """theta with every site outside ``regions`` pinned to label 0."""
        table = grouped(self.theta, self.sites, self.nu, *(r.sites for r in regions))
        return table[..., 0]

    def epsilon_split(self) -> tuple[list[np.ndarray], np.ndarray]:
        """Split anchored on the all-(+1) configuration eps.

        One component: alpha = theta(A, B, eps_C), gamma = theta(eps_A, B, C) - theta(eps_A, B, eps_C).
        Several: alpha_j = 0, gamma = theta(eps_A, B, C).
        """
        if len(self.components) == 1:
            a, b = self.components[0]
            table = self.theta_table(a, b, self.c)
            alpha = table[:, :, 0]
            gamma = (table[0, :, :] - table[0, :, :1]).T
            return [alpha], gamma
        a_all = Region(self.b.window, tuple(s for a, _ in self.components for s in a.sites))
        table = self.theta_table(a_all, self.b, self.c)
        return [np.zeros(shape) for shape in self.shapes], table[0, :, :].T.copy()

    def solve(self, alphas: list[np.ndarray], gamma: np.ndarray) -> PhaseSplit:
        history = [self.objective(alphas, gamma)]
        converged = history[0] <= settings.PHASE_TOLERANCE
        rounds = 0
        while not converged and rounds < settings.PHASE_MAX_ROUNDS:
            rounds += 1
            for j, (key, shape) in enumerate(zip(self.keys, self.shapes)):
                other = self.total_phase(alphas, gamma, skip=j)
                alphas[j] = self.circular_mean(key, shape[0] * shape[1], other).reshape(shape)
            gamma = self.circular_mean(self.key_c, self.dim_c * self.dim_b, self.total_phase(alphas, None))
            gamma = gamma.reshape(self.dim_c, self.dim_b)
            history.append(self.objective(alphas, gamma))
            converged = history[-2] - history[-1] < settings.PHASE_TOLERANCE
        logger.debug("phase split: objective %.3e after %d rounds (converged=%s)", history[-1], rounds, converged)
        return self.split(alphas, gamma, rounds, converged, tuple(history))

    def split(self, alphas, gamma, iterations, converged, history=()) -> PhaseSplit:
        return PhaseSplit(
            components=tuple(PhaseComponent(a, b, alpha) for (a, b), alpha in zip(self.components, alphas)),
            c=self.c,
            gamma=gamma,
            objective=self.objective(alphas, gamma),
            iterations=iterations,
            converged=converged,
            history=history,
        )


def _seed(problem: _PhaseProblem, initial: Optional[PhaseSplit]) -> tuple[list[np.ndarray], np.ndarray]:
    if initial is None:
        return problem.epsilon_split()
    alphas = [np.array(component.alpha, dtype=np.float64) for component in initial.components]
    if [alpha.shape for alpha in alphas] != problem.shapes or initial.gamma.shape != (problem.dim_c, problem.dim_b):
        raise ValueError("initial phase split does not match the partition")
    return alphas, np.array(initial.gamma, dtype=np.float64)


def phase_deficit(state: PureState, tri: Tripartition, initial: Optional[PhaseSplit] = None) -> PhaseSplit:
    """Alternating weighted-circular-mean minimization of the phase-splitting objective.

    The returned objective bounds the infimum from above. ``initial`` seeds the iteration,
    otherwise the eps = all-(+1) splitting is used.
    """
    problem = _PhaseProblem(state, [(tri.a, tri.b)], tri.c)
    return problem.solve(*_seed(problem, initial))


def phase_deficit_multi(
    state: PureState, components: Sequence[tuple[Region, Region]], c: Region, initial: Optional[PhaseSplit] = None
) -> PhaseSplit:
    """Phase deficit with one alpha_j per (A_j, B_j) component, up to four components."""
    if not 1 <= len(components) <= 4:
        raise ValueError(f"between one and four components are supported, got {len(components)}")
    _check_disjoint(*(r for pair in components for r in pair), c)
    problem = _PhaseProblem(state, components, c)
    return problem.solve(*_seed(problem, initial))


def split_objective(state: PureState, split: PhaseSplit) -> float:
    """Recompute a split's objective from its stored tables."""
    problem = _PhaseProblem(state, [(component.a, component.b) for component in split.components], split.c)
    return problem.objective([component.alpha for component in split.components], split.gamma)


def merged(split: PhaseSplit, local_dim: int = 2) -> PhaseSplit:
    """Single-component split on (A, B) whose alpha is the sum of the component alphas."""
    a, b = split.a, split.b
    dim_a, dim_b = local_dim ** len(a), local_dim ** len(b)
    code_a = np.repeat(np.arange(dim_a), dim_b)
    code_b = np.tile(np.arange(dim_b), dim_a)
    alpha = np.zeros(dim_a * dim_b)
    for component in split.components:
        key_a = subcodes(code_a, a.sites, component.a.sites, local_dim)
        key_b = subcodes(code_b, b.sites, component.b.sites, local_dim)
        alpha += component.alpha[key_a, key_b]
    return PhaseSplit(
        components=(PhaseComponent(a, b, alpha.reshape(dim_a, dim_b)),),
        c=split.c,
        gamma=split.gamma,
        objective=split.objective,
        iterations=split.iterations,
        converged=split.converged,
        history=split.history,
    )


def phase_grid_oracle(state: PureState, tri: Tripartition, steps: int = 64) -> PhaseSplit:
    """Exhaustive search over alpha on a 2 pi / steps grid, with gamma solved exactly.

    The gauge alpha(eps_A, sigma_B) = 0 removes one angle per buffer sector. When C is the
    smaller side the roles of alpha and gamma are exchanged.
    """
    check_capacity("sites", state.window.site_count, settings.MAX_ORACLE_SITES)
    problem = _PhaseProblem(state, [(tri.a, tri.b)], tri.c)
    nu = state.local_dim
    weighted = grouped(problem.weighted, problem.sites, nu, tri.a.sites, tri.b.sites, tri.c.sites)
    swap = len(tri.c) < len(tri.a)
    if swap:
        weighted = weighted.transpose(2, 1, 0, 3)
    dim_grid, dim_b, dim_exact = weighted.shape[:3]
    free = dim_grid - 1
    points = steps**free
    if points > MAX_GRID_POINTS:
        raise CapacityError("grid size", points, MAX_GRID_POINTS)
    ticks = 2 * np.pi * np.arange(steps) / steps
    grid = np.zeros((points, dim_grid))
    if free:
        grid[:, 1:] = np.stack(np.meshgrid(*([ticks] * free), indexing="ij"), axis=-1).reshape(points, free)
    rotations = np.exp(-1j * grid)
    grid_table = np.zeros((dim_grid, dim_b))
    exact_table = np.zeros((dim_exact, dim_b))
    for b in range(dim_b):
        sector = weighted[:, b, :, :].sum(axis=2)
        sums = rotations @ sector
        best = int(np.argmax(np.abs(sums).sum(axis=1)))
        grid_table[:, b] = grid[best]
        exact_table[:, b] = np.angle(sums[best])
    alpha, gamma = (exact_table, grid_table) if swap else (grid_table, exact_table)
    split = problem.split([alpha], gamma, iterations=points, converged=True)
    logger.debug("phase grid oracle: %d points per sector, objective %.6f", points, split.objective)
    return split


def _max_covariance(p: ProbabilityTable, u: int, v: int, domain: Region) -> float:
    covariances, weights = conditional_covariances(p, u, v, domain)
    return float(covariances[weights > settings.NULL_EVENT].max())


def influence_kernel(
    p: ProbabilityTable,
    b: Region,
    u: int,
    v: int,
    mode: str = "exact",
    avoid: Optional[Region] = None,
    domains: Iterable[Region] = (),
) -> float:
    """K_B(u, v): largest conditional covariance of (u, v) over domains D containing B.

    ``exact`` enumerates every D between B and W minus {u, v} (and minus ``avoid``);
    ``restricted`` only tries B plus balls around u, plus any extra ``domains``, and so
    yields a lower bound.
    """
    window = p.window
    if u in b or v in b or u == v:
        raise RegionError("kernel sites must be distinct and outside the buffer")
    excluded = b | Region(window, (u, v)) | (avoid if avoid is not None else Region(window))
    free = excluded.complement()
    candidates: list[Region] = []
    if mode == "exact":
        check_capacity("free sites", len(free), settings.MAX_KERNEL_FREE_SITES)
        for size in range(len(free) + 1):
            for extra in itertools.combinations(free.sites, size):
                candidates.append(b | Region(window, extra))
    elif mode == "restricted":
        distance = {w: window.distance(u, w) for w in free}
        for radius in sorted(set(distance.values()) | {0}):
            candidates.append(b | Region(window, tuple(w for w in free if distance[w] <= radius)))
    else:
        raise ValueError(f"unknown kernel mode {mode!r}")
    for domain in domains:
        if not b <= domain or u in domain or v in domain:
            raise RegionError("extra kernel domains must contain B and avoid u, v")
        candidates.append(domain)
    return max(_max_covariance(p, u, v, domain) for domain in candidates)


def fkg_rhs(p: ProbabilityTable, a: Region, b: Region, u: int, kappa: float = FKG_KAPPA) -> float:
    """kappa * sum_{a' in A} <sigma_a'; sigma_u>_B with the buffer-averaged covariance."""
    _check_disjoint(a, b, Region(p.window, (u,)))
    total = 0.0
    for site in a:
        covariances, weights = conditional_covariances(p, site, u, b)
        total += float(weights @ covariances)
    return kappa * total


def fkg_audit(p: ProbabilityTable, a: Region, b: Region, u: int) -> list[AuditReport]:
    """delta_B(A|{u}) against the FKG covariance bound, at the audited and the literal constant."""
    lhs = tv_conditional(p, a, b, Region(p.window, (u,))).value
    covariance = fkg_rhs(p, a, b, u, kappa=1.0)
    inputs = {"a": list(a.sites), "b": list(b.sites), "u": u}
    reports = [
        AuditReport.build("fkg_flip", lhs, FKG_KAPPA * covariance, inputs, kappa=FKG_KAPPA),
        AuditReport.build(
            "fkg_flip", lhs, FKG_KAPPA_LITERAL * covariance, inputs, kappa=FKG_KAPPA_LITERAL, informational=True
        ),
    ]
    if not reports[0].passed:
        logger.warning("FKG bound fails for a=%s b=%s u=%d: %.3g > %.3g", a.sites, b.sites, u, lhs, reports[0].rhs)
    return reports


def kernel_bound_audit(
    p: ProbabilityTable, a: Region, b: Region, c: Region, mode: str = "exact", exclude_targets: bool = False
) -> list[AuditReport]:
    """delta_B(A|C) against kappa * sum_{u in A, v in C} K_B(u, v).

    In restricted mode each K_B(u, c_j) also tries the telescoping domain B + {c_1..c_{j-1}}.
    With ``exclude_targets`` the enumerated domains keep clear of the other sites of C.
    """
    _check_disjoint(a, b, c)
    window = p.window
    if mode == "exact" and len(b.complement()) - 2 > settings.MAX_KERNEL_FREE_SITES:
        logger.info("kernel audit: %d free sites, using restricted mode", len(b.complement()) - 2)
        mode = "restricted"
    total = 0.0
    for j, v in enumerate(c.sites):
        chain = b | Region(window, c.sites[:j])
        avoid = c - Region(window, (v,)) if exclude_targets else None
        extra = [chain] if mode == "restricted" and not exclude_targets else []
        for u in a:
            total += influence_kernel(p, b, u, v, mode=mode, avoid=avoid, domains=extra)
    lhs = tv_conditional(p, a, b, c).value
    inputs = {
        "a": list(a.sites),
        "b": list(b.sites),
        "c": list(c.sites),
        "mode": mode,
        "exclude_targets": exclude_targets,
    }
    return [
        AuditReport.build("kernel_bound", lhs, FKG_KAPPA * total, inputs, kappa=FKG_KAPPA),
        AuditReport.build(
            "kernel_bound", lhs, FKG_KAPPA_LITERAL * total, inputs, kappa=FKG_KAPPA_LITERAL, informational=True
        ),
    ]


def tv_algebra_audit(p: ProbabilityTable, a: Region, b: Region, c: Region, d: Region) -> list[AuditReport]:
    """Symmetry, monotonicity, sub-cocycle, telescoping and four-term bounds of the TV functionals."""
    _check_disjoint(a, b, c, d)
    window = p.window
    empty = Region(window)
    inputs = {"a": list(a.sites), "b": list(b.sites), "c": list(c.sites), "d": list(d.sites)}

    def delta(x: Region, given: Region, y: Region) -> float:
        return tv_conditional(p, x, given, y).value

    reports = [
        AuditReport.build("symmetry", abs(tv(p, a, c).value - tv(p, c, a).value), 0.0, inputs),
        AuditReport.build("monotonicity", tv(p, a, c).value, tv(p, a, c | d).value, inputs),
        AuditReport.build("sub_cocycle", tv(p, a, c | d).value, tv(p, a, c).value + delta(a, c, d), inputs),
        AuditReport.build(
            "sub_cocycle_conditional", delta(a, b, c | d), delta(a, b, c) + delta(a, b | c, d), inputs
        ),
    ]
    steps = sum(delta(a, b | Region(window, c.sites[:j]), Region(window, (v,))) for j, v in enumerate(c.sites))
    reports.append(AuditReport.build("telescoping", delta(a, b, c), steps, inputs))

    # A1 = a, B1 = b, A2 = c, B2 = d
    outer = delta(a | b, empty, c | d)
    chain = delta(b, empty, d) + delta(a, b, d) + delta(b, d, c) + delta(a, b | d, c)
    literal = delta(a, empty, c) + delta(a, b, c) + delta(a, d, c) + delta(a, b | d, c)
    reports.append(AuditReport.build("four_term", outer, chain, inputs))
    reports.append(AuditReport.build("four_term_literal", outer, literal, inputs, informational=True))
    if not d.is_empty():
        reports.append(single_flip_audit(p, a, b, d.sites[0]))
    for report in reports:
        if report.failed:
            logger.warning("TV algebra check %s fails: %.3g > %.3g", report.inequality, report.lhs, report.rhs)
    return reports
