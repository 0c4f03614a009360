import logging
from pathlib import Path

from entanglab.core.config import settings
from entanglab.core.errors import check_capacity
from entanglab.physics.lattice import buffer
from entanglab.physics.oracles import (
    boundary_oracle,
    buffer_oracle,
    hamiltonian_oracle,
    phase_oracle,
    reduce_oracle,
    tv_oracle,
)
from entanglab.physics.states import probability_table
from entanglab.repositories import ReportRepository
from entanglab.schemas import AuditReport, RunHeader
from entanglab.services.model import ModelService

logger = logging.getLogger(__name__)


class OracleService:
    """Brute-force cross-checks of the production routines on small windows."""

    def __init__(self, models: ModelService, out_dir: Path, header: RunHeader):
        self.models = models
        self.config = models.config
        self.report_repo = ReportRepository(out_dir, header)

    def run(self) -> tuple[list[Path], list[AuditReport]]:
        window = self.models.window
        check_capacity("sites", window.site_count, settings.MAX_ORACLE_SITES)
        reports: list[AuditReport] = []
        if self.config.is_ising:
            reports.extend(hamiltonian_oracle(self.config.model))
        state = self.models.state()
        a = self.models.region("a", default=window.region((0,)))
        p = probability_table(state)
        reports.append(reduce_oracle(state, a))
        reports.append(boundary_oracle(a))
        for l in self.config.widths:
            tri = buffer(a, l)
            reports.append(buffer_oracle(a, l))
            if tri.c.is_empty():
                continue
            reports.append(tv_oracle(p, tri))
            reports.extend(phase_oracle(state, tri, self.config.grid_steps))
        logger.info("oracle: %d cross-checks", len(reports))
        return [self.report_repo.save("oracle", reports)], reports
