import logging
from pathlib import Path

import numpy as np

from entanglab.core.config import settings
from entanglab.core.errors import check_capacity
from entanglab.models import DensityMatrix, Region
from entanglab.physics.approximation import (
    approximation_rank_audit,
    decoupled_fidelity_audit,
    fidelity_bound_audit,
    markov_state,
    overlap_and_fidelity,
)
from entanglab.physics.bounds import f_trace_check, fannes_bound, tail_mass_audit
from entanglab.physics.decorrelation import fkg_audit, kernel_bound_audit, phase_deficit, tv_algebra_audit
from entanglab.physics.generators import random_density_matrix, random_psd_pair
from entanglab.physics.ising import dss_audit, stoquastic_check
from entanglab.physics.lattice import buffer, distances_from
from entanglab.physics.states import probability_table, reduce
from entanglab.repositories import ApproximationRepository, ReportRepository
from entanglab.schemas import AuditReport, RunHeader
from entanglab.services.model import ModelService

logger = logging.getLogger(__name__)

# random instances per entropy-continuity and F-trace inequality
INEQUALITY_SAMPLES = 100
INEQUALITY_MAX_DIM = 16


class AuditService:
    """Runs the inequality suite on the experiment's state around region ``a``."""

    def __init__(self, models: ModelService, out_dir: Path, header: RunHeader):
        self.models = models
        self.config = models.config
        self.report_repo = ReportRepository(out_dir, header)
        self.approximation_repo = ApproximationRepository(out_dir, header)

    def run(self) -> tuple[list[Path], list[AuditReport]]:
        state = self.models.state()
        check_capacity("sites", state.window.site_count, settings.MAX_AUDIT_SITES)
        a = self.models.region("a")
        reports = self.buffer_suite(a)
        stoquastic = stoquastic_check(state)
        if self.config.model.ferromagnetic_measure and stoquastic.stoquastic:
            reports.append(dss_audit(state, self.config.max_domain))
        if "a1" in self.config.regions and "a2" in self.config.regions:
            a1, a2 = self.models.region("a1"), self.models.region("a2")
            reports.append(decoupled_fidelity_audit(state, a1, a2, self.config.widths[0]))
        reports.extend(self.inequality_checks())
        failed = [report for report in reports if report.failed]
        logger.info("audit: %d reports, %d failed", len(reports), len(failed))
        return [self.report_repo.save("audit", reports)], reports

    def buffer_suite(self, a: Region) -> list[AuditReport]:
        """Fidelity, tail-mass, rank, Fannes, TV algebra and FKG checks for every buffer width."""
        state = self.models.state()
        p = probability_table(state)
        ferromagnetic = self.config.model.ferromagnetic_measure and stoquastic_check(state).stoquastic
        distance = distances_from(a)
        reports: list[AuditReport] = []
        for l in self.config.widths:
            tri = buffer(a, l)
            if tri.c.is_empty():
                logger.warning("audit: buffer of width %d exhausts the window, stopping", l)
                break
            split = phase_deficit(state, tri)
            approx = markov_state(state, tri, split)
            self.approximation_repo.save(f"approx_l{l}", approx, overlap_and_fidelity(state, approx))
            reports.extend(
                fidelity_bound_audit(
                    state, tri, split, self.models.degenerate, allow_degenerate=self.config.accept_degenerate
                )
            )
            reports.append(tail_mass_audit(state, a, tri.b, split))
            reports.extend(approximation_rank_audit(approx))
            reports.append(fannes_bound(reduce(state, a), reduce(approx.assembled, a)))
            near = Region(state.window, tuple(int(s) for s in np.flatnonzero(distance == l + 1)))
            if not near.is_empty():
                reports.extend(tv_algebra_audit(p, a, tri.b, near, tri.c - near))
            if ferromagnetic:
                for u in tri.c:
                    reports.extend(fkg_audit(p, a, tri.b, u))
                reports.extend(
                    kernel_bound_audit(
                        p, a, tri.b, tri.c, self.config.kernel_mode, self.config.kernel_exclude_targets
                    )
                )
        return reports

    def inequality_checks(self) -> list[AuditReport]:
        """Fannes and F-trace inequalities on seeded random instances."""
        rng = self.models.rng
        reports: list[AuditReport] = []
        for _ in range(INEQUALITY_SAMPLES):
            sites = int(rng.integers(1, int(np.log2(INEQUALITY_MAX_DIM)) + 1))
            region = Region(self.models.window, tuple(range(min(sites, self.models.window.site_count))))
            dim = 2 ** len(region)
            first = DensityMatrix(region, random_density_matrix(dim, rng))
            second = DensityMatrix(region, random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1))))
            reports.append(fannes_bound(first, second))
            reports.extend(f_trace_check(*random_psd_pair(dim, rng)))
        return reports
