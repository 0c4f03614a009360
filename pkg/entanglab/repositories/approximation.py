from pathlib import Path
from typing import Optional

from entanglab.models import MarkovApproximation, Overlap, PureState
from entanglab.repositories.base import BaseRepository
from entanglab.repositories.state import decode_state, encode_state
from entanglab.schemas.report import ApproximationSidecar, RunHeader


class ApproximationRepository(BaseRepository[MarkovApproximation]):
    """Buffer approximations as QPSV state files with a JSON sidecar."""

    suffix = ".qpsv"

    def __init__(self, root: Path | str, header: RunHeader):
        super().__init__(root)
        self.header = header

    def save(self, name: str, obj: MarkovApproximation, overlap: Optional[Overlap] = None) -> Path:
        split = obj.phase_split
        sidecar = ApproximationSidecar(
            **obj.tri.describe(),
            vartheta=split.objective,
            iterations=split.iterations,
            converged=split.converged,
            renormalization=obj.renormalization,
            overlap_real=overlap.value.real if overlap else None,
            overlap_imag=overlap.value.imag if overlap else None,
        )
        self._write_json(
            self.path(name, ".json"), {"header": self.header.model_dump(), "approximation": sidecar.model_dump()}
        )
        return self._write_bytes(self.path(name), encode_state(obj.assembled))

    def load_state(self, name: str) -> PureState:
        return decode_state(self._read_bytes(self.path(name)))

    def load_sidecar(self, name: str) -> ApproximationSidecar:
        return ApproximationSidecar(**self._read_json(self.path(name, ".json"))["approximation"])
