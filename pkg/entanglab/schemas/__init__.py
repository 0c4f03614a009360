from .experiment import ExperimentConfig
from .model import CouplingSpec, GibbsSpec, HandStateSpec, IsingSpec, ModelSpec, RandomStateSpec, RegionSpec
from .report import (
    ApproximationSidecar,
    AreaLawBound,
    AuditReport,
    BoundReport,
    DecayFit,
    DecayModel,
    GroundStateSummary,
    RunHeader,
    StoquasticityReport,
    SweepRow,
    SweepTable,
    TvReport,
)

__all__ = [
    "ApproximationSidecar",
    "AreaLawBound",
    "AuditReport",
    "BoundReport",
    "CouplingSpec",
    "DecayFit",
    "DecayModel",
    "ExperimentConfig",
    "GibbsSpec",
    "GroundStateSummary",
    "HandStateSpec",
    "IsingSpec",
    "ModelSpec",
    "RandomStateSpec",
    "RegionSpec",
    "RunHeader",
    "StoquasticityReport",
    "SweepRow",
    "SweepTable",
    "TvReport",
]
