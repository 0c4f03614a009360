import logging
from typing import Optional

import numpy as np

from entanglab.core.config import settings
from entanglab.core.errors import ConfigError, check_capacity
from entanglab.models import GroundStateResult, PureState, Region
from entanglab.physics.generators import bell_state, ghz_state, gibbs_state, product_state, random_state, sign_state
from entanglab.physics.ising import build_hamiltonian, ground_state
from entanglab.schemas import ExperimentConfig, GibbsSpec, HandStateSpec, RandomStateSpec, RunHeader

logger = logging.getLogger(__name__)


class ModelService:
    """Builds, once per run, the state an experiment is carried out on."""

    def __init__(self, config: ExperimentConfig, threads: Optional[int] = None):
        self.config = config
        self.threads = threads or settings.THREADS
        self.rng = np.random.default_rng(config.seed)
        self._state: Optional[PureState] = None
        self._ground: Optional[GroundStateResult] = None

    @property
    def window(self):
        return self.config.model.window

    def header(self, version: str) -> RunHeader:
        return RunHeader(config_hash=self.config.config_hash(), version=version, seed=self.config.seed)

    def region(self, name: str, default: Optional[Region] = None) -> Region:
        """Named region from the config, or ``default`` when the config does not name it."""
        spec = self.config.regions.get(name)
        if spec is not None:
            return spec.resolve(self.window)
        if default is None:
            raise ConfigError(f"regions.{name}: region is required by {self.config.experiment or 'this experiment'}")
        return default

    def state(self) -> PureState:
        if self._state is None:
            self._state = self._build()
        return self._state

    @property
    def ground(self) -> Optional[GroundStateResult]:
        """Solver result when the state is an Ising ground state."""
        self.state()
        return self._ground

    @property
    def degenerate(self) -> bool:
        return self._ground is not None and self._ground.degenerate

    def _build(self) -> PureState:
        spec = self.config.model
        check_capacity("sites", self.window.site_count, settings.MAX_STATE_SITES)
        if self.config.is_ising:
            self._ground = ground_state(build_hamiltonian(spec, self.threads))
            logger.info(
                "ground state on %d sites: E0=%.10f gap=%.3g",
                self.window.site_count,
                self._ground.energy,
                self._ground.gap,
            )
            return self._ground.state
        if isinstance(spec, GibbsSpec):
            return gibbs_state(spec)
        if isinstance(spec, RandomStateSpec):
            return random_state(spec.window, self.rng, spec.real)
        if isinstance(spec, HandStateSpec):
            return _hand_state(spec)
        raise ConfigError(f"model.kind: unsupported model {spec!r}")


def _hand_state(spec: HandStateSpec) -> PureState:
    if spec.name == "ghz":
        return ghz_state(spec.window)
    if spec.name == "bell":
        return bell_state()
    if spec.name == "sign":
        if spec.window.site_count != 1:
            raise ConfigError("model.dims: the sign state lives on a single site")
        return sign_state()
    if spec.angles is None:
        raise ConfigError("model.angles: a product state needs angles")
    try:
        return product_state(spec.window, spec.angles)
    except ValueError as exc:
        raise ConfigError(f"model.angles: {exc}") from exc
