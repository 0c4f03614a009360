from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from entanglab.models.lattice import Region, Tripartition
from entanglab.models.states import DensityMatrix, PureState


@dataclass(frozen=True, eq=False)
class PhaseComponent:
    """Phase table alpha_j over (sigma_{A_j}, sigma_{B_j})."""

    a: Region
    b: Region
    alpha: np.ndarray


@dataclass(frozen=True, eq=False)
class PhaseSplit:
    """Additive phase split ``sum_j alpha_j(sigma_{A_j}, sigma_{B_j}) + gamma(sigma_C, sigma_B)``.

    ``objective`` is the weighted deviation the tables achieve; it is an upper bound on the
    infimum over all splits.
    """

    components: tuple[PhaseComponent, ...]
    c: Region
    gamma: np.ndarray
    objective: float
    iterations: int
    converged: bool
    history: tuple[float, ...] = ()

    @property
    def a(self) -> Region:
        return _union(component.a for component in self.components)

    @property
    def b(self) -> Region:
        return _union(component.b for component in self.components)

    @property
    def tripartition(self) -> Tripartition:
        return Tripartition(self.a, self.b, self.c)

    @property
    def alpha(self) -> np.ndarray:
        """Table over (sigma_A, sigma_B) for a single component split."""
        if len(self.components) != 1:
            raise ValueError("alpha is only a single table for one-component splits")
        return self.components[0].alpha


def _union(regions) -> Region:
    regions = list(regions)
    merged = regions[0]
    for region in regions[1:]:
        merged = merged | region
    return merged


@dataclass(frozen=True, eq=False)
class MarkovApproximation:
    tri: Tripartition
    codes: np.ndarray
    weights: np.ndarray
    vectors_a: np.ndarray
    vectors_c: np.ndarray
    phase_split: PhaseSplit
    assembled: PureState
    renormalization: float = 0.0


@dataclass(frozen=True, eq=False)
class ReducedApproximation:
    tri: Tripartition
    codes: np.ndarray
    weights: np.ndarray
    top_vectors: np.ndarray
    top_eigenvalues: np.ndarray
    assembled: DensityMatrix
    bound: float
    distance: float
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.distance <= self.bound + 1e-10


@dataclass(frozen=True, eq=False)
class Overlap:
    value: complex
    distance: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.distance <= self.bound + 1e-10

    @property
    def one_minus_overlap(self) -> float:
        return 1.0 - abs(self.value)


@dataclass(frozen=True, eq=False)
class ProductApproximation:
    """Two-component buffer approximation whose reduction on A1 u A2 is a product."""

    a1: Region
    a2: Region
    b1: Region
    b2: Region
    c: Region
    assembled: PureState
    markov: Optional[MarkovApproximation] = None
