import logging
import math
from pathlib import Path

from entanglab.core.errors import ConfigError, EntanglabError, RegionError
from entanglab.models import Region
from entanglab.physics.approximation import decoupled_fidelity_audit, mutual_information, pinsker_audit
from entanglab.physics.approximation import site_observable
from entanglab.physics.bounds import area_law_rhs, decoupling_verify, entropy_diff_audit, fit_column
from entanglab.physics.ising import correlator
from entanglab.physics.lattice import end_block, regularity_check
from entanglab.physics.states import reduce, renyi_entropy, von_neumann_entropy
from entanglab.repositories import ReportRepository
from entanglab.schemas import AuditReport, RunHeader
from entanglab.services.model import ModelService

logger = logging.getLogger(__name__)


class ScanService:
    """Entropy, buffer and mutual-information sweeps."""

    def __init__(self, models: ModelService, out_dir: Path, header: RunHeader):
        self.models = models
        self.config = models.config
        self.report_repo = ReportRepository(out_dir, header)

    def _blocks(self) -> list[tuple[str, Region]]:
        if self.config.regions:
            return [(name, spec.resolve(self.models.window)) for name, spec in sorted(self.config.regions.items())]
        window = self.models.window
        if window.dimension != 1:
            raise ConfigError("regions: entropy-scan needs named regions on windows of dimension > 1")
        sizes = self.config.block_sizes or range(1, window.site_count)
        return [(f"end_{size}", end_block(window, size)) for size in sizes]

    def entropy_scan(self) -> list[Path]:
        """S(rho_A) and Renyi entropies per block, with the single-scale ratio S / (|dA| ln L(A))."""
        state = self.models.state()
        orders = self.config.renyi_orders
        columns = ["region", "size", "boundary_size", "entropy", *(f"renyi_{order:g}" for order in orders), "ratio"]
        rows = []
        for name, a in self._blocks():
            if len(a) == state.window.site_count:
                raise RegionError(f"regions.{name}: block covers the window")
            # the smaller side has the same nonzero spectrum
            side = a if len(a) <= state.window.site_count // 2 else a.complement()
            rho = reduce(state, side)
            entropy = von_neumann_entropy(rho)
            regularity = regularity_check(a)
            ratio = ""
            if regularity.length_scale >= 2:
                ratio = entropy / (regularity.boundary_size * math.log(regularity.length_scale))
            renyi = [renyi_entropy(rho, order) if order != 1 else entropy for order in orders]
            rows.append([name, len(a), regularity.boundary_size, entropy, *renyi, ratio])
            logger.info("entropy-scan %s (|A|=%d): S=%.10f", name, len(a), entropy)
        return [self.report_repo.save_rows("entropy_scan", columns, rows)]

    def buffer_scan(self) -> tuple[list[Path], list[AuditReport]]:
        """Decoupling sweep over the configured widths, with the bounds its decay model implies."""
        state = self.models.state()
        a = self.models.region("a")
        table = decoupling_verify(state, a, self.config.widths, self.models.threads)
        if table.model is not None and self.config.l0 is not None:
            table.model = table.model.model_copy(update={"l0": self.config.l0})
        paths = list(self.report_repo.save_sweep("buffer_scan", table))
        reports: list[AuditReport] = []
        fit = table.fits["delta"]
        if fit.model is not None:
            fit = fit.model_copy(update={"model": table.model})
            for l in self.config.widths:
                if l >= table.model.l0:
                    reports.append(entropy_diff_audit(state, a, l, fit))
            bound = area_law_rhs(table.model, a, state.local_dim)
            paths.append(self.report_repo.save_json("area_law", bound.model_dump(), key="area_law"))
        paths.append(self.report_repo.save("buffer_scan_bounds", reports))
        return paths, reports

    def mutual_info(self) -> tuple[list[Path], list[AuditReport]]:
        """I(A1:A2) and truncated correlations against the separation of two blocks of a chain."""
        state = self.models.state()
        window = self.models.window
        if window.dimension != 1:
            raise ConfigError("model.dims: mutual-info runs on one-dimensional windows")
        block, n = self.config.block, window.site_count
        axes = self.config.observables
        columns = ["separation", "mutual_information", *(f"{axis}_correlation" for axis in axes)]
        rows, reports, series = [], [], []
        for separation in self.config.separations:
            start = block - 1 + separation
            if start + block > n:
                logger.warning("mutual-info: separation %d does not fit on %d sites, skipped", separation, n)
                continue
            a1 = Region(window, tuple(range(block)))
            a2 = Region(window, tuple(range(start, start + block)))
            u, v = block - 1, start
            information = mutual_information(state, a1, a2)
            rows.append([separation, information, *(correlator(state, u, v, axis, truncated=True) for axis in axes)])
            series.append((separation, information))
            for axis in axes:
                reports.append(
                    pinsker_audit(state, a1, a2, site_observable(a1, u, axis), site_observable(a2, v, axis))
                )
            if separation >= 3:
                reports.append(decoupled_fidelity_audit(state, a1, a2, separation // 3))
        if not rows:
            raise EntanglabError("mutual-info: no separation fits in the window")
        fit = fit_column([s for s, _ in series], [max(value, 0.0) for _, value in series])
        paths = [
            self.report_repo.save_rows("mutual_info", columns, rows),
            self.report_repo.save("mutual_info_audit", reports),
            self.report_repo.save_json("mutual_info_fit", fit.model_dump(mode="json"), key="fit"),
        ]
        return paths, reports
