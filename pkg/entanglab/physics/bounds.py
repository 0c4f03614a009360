"""Entropy-side bounds: Fannes-type continuity, F-trace subadditivity, spectral tails and area laws."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
from scipy import optimize, special

from entanglab.core.config import settings
from entanglab.core.errors import EntanglabError, InvalidStateError, RegionError
from entanglab.models import DensityMatrix, PhaseSplit, PureState, Region, Tripartition
from entanglab.physics.approximation import markov_state, overlap_and_fidelity
from entanglab.physics.decorrelation import phase_deficit, tv_conditional
from entanglab.physics.lattice import buffer, regularity_check
from entanglab.physics.states import (
    entanglement_entropy,
    probability_table,
    reduce,
    spectral_tail,
    trace_distance,
    von_neumann_entropy,
)
from entanglab.schemas.report import AreaLawBound, BoundReport, DecayFit, DecayModel, SweepRow, SweepTable

logger = logging.getLogger(__name__)

IDENTICAL_STATES = 1e-14
PSD_TOLERANCE = -1e-12
RANK_CUTOFF = 1e-12
# Sweep values below this are treated as exact zeros
DECAY_FLOOR = 1e-13
FIT_COLUMNS = ("delta", "vartheta", "one_minus_overlap", "tau")


def fannes_bound(r1: DensityMatrix, r2: DensityMatrix) -> BoundReport:
    """|S(r1) - S(r2)| <= T/2 (1 + ln(2 rank(r1 - r2) / T)) with T the trace distance."""
    distance = trace_distance(r1, r2)
    lhs = abs(von_neumann_entropy(r1) - von_neumann_entropy(r2))
    if distance < IDENTICAL_STATES:
        return BoundReport.build("fannes", lhs, 0.0, {"trace_distance": distance, "rank": 0}, family="fannes")
    difference = np.linalg.eigvalsh(r1.matrix - r2.matrix)
    rank = int(np.sum(np.abs(difference) > RANK_CUTOFF * np.abs(difference).max()))
    rhs = 0.5 * distance * (1.0 + math.log(2.0 * rank / distance))
    return BoundReport.build("fannes", lhs, rhs, {"trace_distance": distance, "rank": rank}, family="fannes")


def f_function(x: np.ndarray) -> np.ndarray:
    """F(x) = x (1 + ln 1/x) on [0, 1] and 1 above."""
    x = np.asarray(x, dtype=np.float64)
    inside = np.clip(x, 0.0, 1.0)
    return np.where(x > 1.0, 1.0, inside + special.entr(inside))


def _psd_spectrum(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidStateError(f"{name} must be a square matrix, got shape {matrix.shape}")
    values = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))
    if values.min() < PSD_TOLERANCE:
        raise InvalidStateError(f"{name} is not positive semidefinite: eigenvalue {values.min():.3e}")
    return np.clip(values, 0.0, None)


def f_trace_check(a: np.ndarray, b: np.ndarray) -> tuple[BoundReport, BoundReport]:
    """tr F(A+B) <= tr F(A) + tr F(B), and the Jensen form tr F(A) + N F(tr B / N)."""
    spectrum_a = _psd_spectrum(a, "A")
    spectrum_b = _psd_spectrum(b, "B")
    if spectrum_a.shape != spectrum_b.shape:
        raise InvalidStateError("A and B have different dimensions")
    lhs = float(f_function(_psd_spectrum(np.asarray(a) + np.asarray(b), "A+B")).sum())
    trace_fa = float(f_function(spectrum_a).sum())
    n = spectrum_b.size
    inputs = {"dimension": n, "trace_a": float(spectrum_a.sum()), "trace_b": float(spectrum_b.sum())}
    return (
        BoundReport.build(
            "f_trace_subadditivity", lhs, trace_fa + float(f_function(spectrum_b).sum()), inputs, family="f_trace"
        ),
        BoundReport.build(
            "f_trace_jensen", lhs, trace_fa + n * float(f_function(spectrum_b.sum() / n)), inputs, family="f_trace"
        ),
    )


def tail_mass_audit(state: PureState, a: Region, b: Region, phase_split: Optional[PhaseSplit] = None) -> BoundReport:
    """tau_{rho_A}(nu^|B|) <= 2 delta_B(A|C) + 2 vartheta with C the rest of the window."""
    if not a.isdisjoint(b):
        raise RegionError("regions overlap")
    c = (a | b).complement()
    split = phase_split or phase_deficit(state, Tripartition(a, b, c))
    delta = tv_conditional(probability_table(state), a, b, c).value
    tail = spectral_tail(reduce(state, a), state.local_dim ** len(b))
    inputs = {"a": list(a.sites), "b": list(b.sites), "delta": delta, "vartheta": split.objective}
    return BoundReport.build("tail_mass", tail, 2.0 * delta + 2.0 * split.objective, inputs, family="tail_mass")


def decoupling_distance(xi: float, boundary_size: int) -> int:
    """l0(A) = max(1, ceil(xi ln |dA|))."""
    if boundary_size < 1:
        raise RegionError("region has an empty boundary")
    return max(1, math.ceil(xi * math.log(boundary_size)))


def decay_sums(model: DecayModel, start: int, stop: int) -> tuple[float, float]:
    """I1 = sum phi(k)(1 + k) and I2 = sum phi(k)(1 + ln 1/phi(k)) over start <= k <= stop."""
    if stop < start:
        return 0.0, 0.0
    k = np.arange(max(start, 0), stop + 1, dtype=np.float64)
    phi = model.phi(k)
    return float(np.sum(phi * (1.0 + k))), float(np.sum(phi + special.entr(phi)))


def area_law_rhs(model: DecayModel, a: Region, nu: int = 2) -> AreaLawBound:
    """C_d |dA| ln nu [l0 + 2 (1 + l0) I1(0)] + 2 I2(0), using the region's measured C_d."""
    regularity = regularity_check(a)
    if not regularity.is_regular:
        raise RegionError("region is not regular")
    i1, i2 = decay_sums(model, 0, math.floor(regularity.length_scale))
    l0 = model.l0
    rhs = regularity.C_d * regularity.boundary_size * math.log(nu) * (l0 + 2.0 * (1 + l0) * i1) + 2.0 * i2
    single = None
    if regularity.length_scale >= 2:
        single = regularity.boundary_size * math.log(regularity.length_scale)
    return AreaLawBound(
        rhs=rhs,
        i1=i1,
        i2=i2,
        l0=l0,
        nu=nu,
        boundary_size=regularity.boundary_size,
        C_d=regularity.C_d,
        length_scale=regularity.length_scale,
        single_scale_denominator=single,
    )


def entropy_diff_rhs(model: DecayModel, a: Region, l: int, nu: int = 2, buffer_size: Optional[int] = None) -> float:
    """Three-term bound on |S(rho_A(psi)) - S(rho_A(psi_(B_l)))| for l >= l0."""
    if l < model.l0:
        raise EntanglabError(f"buffer width {l} is below the decoupling distance {model.l0}")
    regularity = regularity_check(a)
    if not regularity.is_regular:
        raise RegionError("region is not regular")
    if buffer_size is None:
        buffer_size = len(buffer(a, l).b)
    shift = l - model.l0
    root = math.sqrt(2.0 * float(model.phi(shift)))
    # root (1 + ln(nu^|B| / root)), continuous at root = 0
    head = root * (1.0 + buffer_size * math.log(nu)) + float(special.entr(root))
    i1, i2 = decay_sums(model, shift, math.floor(regularity.length_scale))
    return head + 2.0 * regularity.C_d * regularity.boundary_size * math.log(nu) * (l + 1) * i1 + 2.0 * i2


def entropy_diff_audit(
    state: PureState, a: Region, l: int, fit: DecayFit, phase_split: Optional[PhaseSplit] = None
) -> BoundReport:
    """Audit the entropy difference against the bound of a fitted decay model.

    Without a decay certificate the report is informational.
    """
    if fit.model is None:
        raise EntanglabError(f"no decay model to audit against: {fit.reason or 'fit rejected'}")
    tri = buffer(a, l)
    split = phase_split or phase_deficit(state, tri)
    approx = markov_state(state, tri, split)
    lhs = abs(entanglement_entropy(state, a) - entanglement_entropy(approx.assembled, a))
    rhs = entropy_diff_rhs(fit.model, a, l, state.local_dim, len(tri.b))
    inputs = {**tri.describe(), "l": l, "l0": fit.model.l0, "xi": fit.model.xi, "certificate": fit.certificate}
    return BoundReport.build(
        "entropy_difference", lhs, rhs, inputs, family="entropy_difference", informational=not fit.certificate
    )


def _rejected(points: int, reason: str, residual: float = math.inf) -> DecayFit:
    return DecayFit(model=None, max_relative_residual=residual, certificate=False, points=points, reason=reason)


def decay_fit(series: Sequence[tuple[float, float]], kind: str = "exponential") -> DecayFit:
    """Least-squares fit of ln(value) against l (exponential) or ln(1 + l/xi) (power).

    For the exponential kind the fitted prefactor is absorbed into l0, so that phi(l - l0)
    dominates the fitted curve.
    """
    if len(series) < 3:
        raise ValueError(f"decay fit needs at least 3 points, got {len(series)}")
    ls = np.array([point[0] for point in series], dtype=np.float64)
    values = np.array([point[1] for point in series], dtype=np.float64)
    if np.any(values <= 0):
        raise ValueError("decay fit needs positive values")
    logs = np.log(values)
    if kind == "exponential":
        design = np.column_stack([np.ones_like(ls), ls])
        (intercept, slope), *_ = np.linalg.lstsq(design, logs, rcond=None)
        if slope > -1e-9:
            return _rejected(len(series), "values do not decay")
        xi = -1.0 / slope
        fitted = np.exp(intercept + slope * ls)
        model = DecayModel(kind="exponential", xi=xi, l0=max(0, math.ceil(intercept * xi)))
    elif kind == "power":
        def curve(l, intercept, xi, alpha):
            return intercept - alpha * np.log1p(l / xi)

        try:
            (intercept, xi, alpha), _ = optimize.curve_fit(
                curve, ls, logs, p0=(logs[0], 1.0, 1.0), bounds=([-np.inf, 1e-9, 1e-9], [np.inf, np.inf, np.inf])
            )
        except (RuntimeError, ValueError) as exc:
            return _rejected(len(series), f"power fit failed: {exc}")
        fitted = np.exp(curve(ls, intercept, xi, alpha))
        model = DecayModel(kind="power", xi=xi, alpha=alpha)
    else:
        raise ValueError(f"unknown decay kind {kind!r}")
    residual = float(np.max(np.abs(fitted - values) / values))
    certificate = residual < settings.CERTIFICATE_RESIDUAL
    logger.debug("decay fit %s: xi=%.4g residual=%.3g certificate=%s", kind, model.xi, residual, certificate)
    return DecayFit(model=model, max_relative_residual=residual, certificate=certificate, points=len(series))


def fit_column(widths: Sequence[int], values: Sequence[float]) -> DecayFit:
    """Exponential fit of a nonnegative series; a series that vanishes identically is certified Markov."""
    if all(value < DECAY_FLOOR for value in values):
        return DecayFit(
            model=DecayModel(kind="markov", l0=widths[0]),
            max_relative_residual=0.0,
            certificate=True,
            points=len(values),
            reason="vanishes",
        )
    series = [(l, value) for l, value in zip(widths, values) if value >= DECAY_FLOOR]
    if len(series) < 3:
        return _rejected(len(series), "fewer than 3 nonzero points")
    return decay_fit(series)


def _sweep_row(state: PureState, a: Region, l: int) -> SweepRow:
    tri = buffer(a, l)
    if tri.c.is_empty():
        raise RegionError(f"buffer of width {l} exhausts the complement")
    split = phase_deficit(state, tri)
    approx = markov_state(state, tri, split)
    overlap = overlap_and_fidelity(state, approx)
    return SweepRow(
        l=l,
        delta=tv_conditional(probability_table(state), tri.a, tri.b, tri.c).value,
        vartheta=split.objective,
        one_minus_overlap=overlap.one_minus_overlap,
        tau=spectral_tail(reduce(state, a), state.local_dim ** len(tri.b)),
        entropy_diff=abs(entanglement_entropy(state, a) - entanglement_entropy(approx.assembled, a)),
    )


def decoupling_verify(state: PureState, a: Region, widths: Sequence[int], threads: Optional[int] = None) -> SweepTable:
    """One exact row per buffer width plus decay fits of every column.

    The attached model is the delta fit, with l0 raised to at least the decoupling distance.
    """
    widths = list(widths)
    if any(later <= earlier for earlier, later in zip(widths, widths[1:])):
        raise ValueError("widths must be strictly increasing")
    if buffer(a, widths[-1]).c.is_empty():
        raise RegionError(f"buffer of width {widths[-1]} exhausts the complement")
    threads = threads or settings.THREADS
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda l: _sweep_row(state, a, l), widths))
    table = SweepTable(rows=rows, fits={})
    for name in FIT_COLUMNS:
        table.fits[name] = fit_column(widths, table.column(name))
    model = table.fits["delta"].model
    if model is not None and model.kind != "markov":
        floor = decoupling_distance(model.xi, regularity_check(a).boundary_size)
        model = model.model_copy(update={"l0": max(model.l0, floor)})
    table.model = model
    logger.info("decoupling sweep over widths %s: model %s", widths, model)
    return table
