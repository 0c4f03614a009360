from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

from entanglab.models.lattice import Window
from entanglab.models.states import PureState

PARALLEL_MIN_DIMENSION = 1 << 16


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Transverse-field Ising operator in the z basis.

    Diagonal part ``-sum J s^z s^z - sum h^z s^z`` is tabulated; every single-spin flip has
    amplitude ``-b``.
    """

    window: Window
    diagonal: np.ndarray
    b: float
    threads: int = 1

    @property
    def dimension(self) -> int:
        return self.diagonal.size

    @property
    def site_count(self) -> int:
        return self.window.site_count

    def _apply_block(self, vector: np.ndarray, start: int, stop: int) -> np.ndarray:
        index = np.arange(start, stop)
        out = self.diagonal[start:stop] * vector[start:stop]
        if self.b != 0.0:
            for k in range(self.site_count):
                out -= self.b * vector[index ^ (1 << k)]
        return out

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector).reshape(-1)
        dim = self.dimension
        if self.threads <= 1 or dim < PARALLEL_MIN_DIMENSION:
            return self._apply_block(vector, 0, dim)
        bounds = np.linspace(0, dim, self.threads + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            blocks = pool.map(lambda k: self._apply_block(vector, bounds[k], bounds[k + 1]), range(self.threads))
            return np.concatenate(list(blocks))

    def to_sparse(self) -> sparse.csr_matrix:
        dim = self.dimension
        rows = [np.arange(dim)]
        cols = [np.arange(dim)]
        data = [self.diagonal]
        if self.b != 0.0:
            for k in range(self.site_count):
                rows.append(np.arange(dim))
                cols.append(np.arange(dim) ^ (1 << k))
                data.append(np.full(dim, -self.b))
        return sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        )

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def expectation(self, state: PureState) -> float:
        return float(np.vdot(state.amplitudes, self.matvec(state.amplitudes)).real)


@dataclass(frozen=True, eq=False)
class GroundStateResult:
    energy: float
    state: PureState
    gap: float
    iterations: int
    residual: float
    degenerate: bool = False
    solver: str = "lanczos"
    excited_energy: Optional[float] = None
