from .approximation import (
    MarkovApproximation,
    Overlap,
    PhaseComponent,
    PhaseSplit,
    ProductApproximation,
    ReducedApproximation,
)
from .ising import GroundStateResult, Hamiltonian
from .lattice import Region, RegularityReport, Tripartition, Window
from .states import (
    DensityMatrix,
    PhaseTable,
    PinchedEnsemble,
    ProbabilityTable,
    PureState,
    SpinConfiguration,
)

__all__ = [
    "DensityMatrix",
    "GroundStateResult",
    "Hamiltonian",
    "MarkovApproximation",
    "Overlap",
    "PhaseComponent",
    "PhaseSplit",
    "PhaseTable",
    "PinchedEnsemble",
    "ProbabilityTable",
    "ProductApproximation",
    "PureState",
    "ReducedApproximation",
    "Region",
    "RegularityReport",
    "SpinConfiguration",
    "Tripartition",
    "Window",
]
