import logging
from pathlib import Path

from entanglab.physics.ising import stoquastic_check
from entanglab.repositories import ReportRepository, StateRepository
from entanglab.schemas import GroundStateSummary, RunHeader
from entanglab.services.model import ModelService

logger = logging.getLogger(__name__)


class GroundStateService:
    """Solve (or build) the experiment's state and persist it."""

    def __init__(self, models: ModelService, out_dir: Path, header: RunHeader):
        self.models = models
        self.state_repo = StateRepository(out_dir)
        self.report_repo = ReportRepository(out_dir, header)

    def run(self) -> list[Path]:
        state = self.models.state()
        paths = [self.state_repo.save("ground", state)]
        stoquastic = stoquastic_check(state)
        result = self.models.ground
        if result is None:
            paths.append(self.report_repo.save_json("ground", stoquastic.model_dump(), key="stoquasticity"))
            return paths
        summary = GroundStateSummary(
            energy=result.energy,
            gap=result.gap,
            excited_energy=result.excited_energy,
            degenerate=result.degenerate,
            solver=result.solver,
            iterations=result.iterations,
            residual=result.residual,
            sites=state.window.site_count,
            stoquastic=stoquastic,
        )
        paths.append(self.report_repo.save_json("ground", summary.model_dump(mode="json"), key="ground"))
        logger.info("ground: E0=%.12f (%s, %d iterations)", result.energy, result.solver, result.iterations)
        return paths
