from dataclasses import dataclass
from functools import cached_property

import numpy as np

from entanglab.core.errors import InvalidStateError
from entanglab.core.tensor import ungrouped
from entanglab.models.lattice import Region, Window

NORM_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12
NEGATIVE_EIGENVALUE = -1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class SpinConfiguration:
    """Assignment of local labels to the sites of a region, as a radix-nu code.

    Digit k of ``code`` is the label of the k-th site of the region; label 0 is spin +1.
    """

    region: Region
    code: int
    local_dim: int = 2

    def __post_init__(self):
        if not 0 <= self.code < self.local_dim ** len(self.region):
            raise InvalidStateError(f"configuration code {self.code} out of range for {len(self.region)} sites")

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple((self.code // self.local_dim**k) % self.local_dim for k in range(len(self.region)))

    @property
    def spins(self) -> tuple[int, ...]:
        return tuple(1 - 2 * label for label in self.labels)

    @classmethod
    def from_spins(cls, region: Region, spins: dict[int, int]) -> "SpinConfiguration":
        """Build a qubit configuration from a site -> +1/-1 mapping."""
        code = sum(((1 - spins[site]) // 2) << k for k, site in enumerate(region.sites))
        return cls(region, code)


@dataclass(frozen=True, eq=False)
class PureState:
    window: Window
    amplitudes: np.ndarray
    local_dim: int = 2

    def __post_init__(self):
        amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        expected = self.local_dim**self.window.site_count
        if amplitudes.size != expected:
            raise InvalidStateError(f"state has {amplitudes.size} amplitudes, expected {expected}")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"state is not normalized: norm={norm:.16g}")
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @property
    def region(self) -> Region:
        return self.window.everything

    @classmethod
    def normalized(cls, window: Window, amplitudes: np.ndarray, local_dim: int = 2) -> "PureState":
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amplitudes)
        if norm == 0.0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(window, amplitudes / norm, local_dim)


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    region: Region
    probs: np.ndarray
    local_dim: int = 2

    def __post_init__(self):
        probs = np.ascontiguousarray(self.probs, dtype=np.float64).reshape(-1)
        expected = self.local_dim ** len(self.region)
        if probs.size != expected:
            raise InvalidStateError(f"probability table has {probs.size} entries, expected {expected}")
        if probs.min() < 0.0:
            raise InvalidStateError(f"negative probability {probs.min():.3g}")
        total = probs.sum()
        if abs(total - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"probabilities sum to {total:.16g}")
        object.__setattr__(self, "probs", _frozen(probs))

    @property
    def window(self) -> Window:
        return self.region.window


@dataclass(frozen=True, eq=False)
class PhaseTable:
    region: Region
    phases: np.ndarray
    defined_mask: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64).reshape(-1)
        mask = np.asarray(self.defined_mask, dtype=bool).reshape(-1)
        if phases.shape != mask.shape:
            raise InvalidStateError("phase table and mask differ in size")
        object.__setattr__(self, "phases", _frozen(np.where(mask, phases, 0.0)))
        object.__setattr__(self, "defined_mask", _frozen(mask))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive, unit-trace operator; spectrum is computed on construction."""

    region: Region
    matrix: np.ndarray
    local_dim: int = 2

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.complex128)
        dim = self.local_dim ** len(self.region)
        if matrix.shape != (dim, dim):
            raise InvalidStateError(f"density matrix shape {matrix.shape}, expected {(dim, dim)}")
        skew = np.abs(matrix - matrix.conj().T).max(initial=0.0)
        if skew > HERMITIAN_TOLERANCE:
            raise InvalidStateError(f"density matrix is not Hermitian (deviation {skew:.3g})")
        matrix = 0.5 * (matrix + matrix.conj().T)
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise InvalidStateError(f"density matrix trace is {trace:.16g}")
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
        if eigenvalues[0] < NEGATIVE_EIGENVALUE:
            raise InvalidStateError(f"density matrix has eigenvalue {eigenvalues[0]:.3g}")
        order = np.argsort(eigenvalues)[::-1]
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "_spectrum", _frozen(np.clip(eigenvalues[order], 0.0, None)))
        object.__setattr__(self, "_eigenvectors", _frozen(eigenvectors[:, order]))

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues in decreasing order, tiny negatives clipped to zero."""
        return self._spectrum

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigenvectors

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def rank(self) -> int:
        """Numerical rank: eigenvalues above 1e-12 times the largest."""
        return int(np.count_nonzero(self.spectrum > 1e-12 * self.spectrum[0]))


@dataclass(frozen=True, eq=False)
class PinchedEnsemble:
    """Outcomes of a non-destructive measurement of the buffer spins.

    ``conditionals[i]`` is the normalized state of the remaining sites given buffer code ``codes[i]``.
    """

    state_window: Window
    buffer: Region
    rest: Region
    codes: np.ndarray
    weights: np.ndarray
    conditionals: np.ndarray
    local_dim: int = 2

    def __len__(self) -> int:
        return int(self.codes.size)

    def member(self, i: int) -> PureState:
        """Member vector embedded in the full window, supported on configurations matching the buffer."""
        dim_b = self.local_dim ** len(self.buffer)
        table = np.zeros((dim_b, self.conditionals.shape[1]), dtype=np.complex128)
        table[self.codes[i]] = self.conditionals[i]
        flat = ungrouped(table, self.state_window.everything.sites, self.local_dim, self.buffer.sites)
        return PureState(self.state_window, flat, self.local_dim)
