import math
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from entanglab.core.config import settings


class AuditReport(BaseModel):
    """One instance of an inequality: ``lhs <= rhs + slack``."""

    inequality: str
    lhs: float
    rhs: float
    margin: float
    passed: bool = Field(alias="pass")
    slack: float = 1e-10
    kappa: Optional[float] = None
    informational: bool = False
    inputs: dict[str, Any] = {}

    model_config = ConfigDict(validate_by_name=True, serialize_by_alias=True)

    @classmethod
    def build(
        cls,
        inequality: str,
        lhs: float,
        rhs: float,
        inputs: Optional[dict[str, Any]] = None,
        slack: Optional[float] = None,
        **extra: Any,
    ):
        slack = settings.AUDIT_SLACK if slack is None else slack
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        return cls(
            inequality=inequality,
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            passed=bool(not math.isnan(margin) and lhs <= rhs + slack),
            slack=slack,
            inputs=inputs or {},
            **extra,
        )

    @property
    def failed(self) -> bool:
        """A failure that counts: informational reports never fail a run."""
        return not self.passed and not self.informational


class BoundReport(AuditReport):
    family: str = ""


class TvReport(BaseModel):
    value: float
    a: list[int]
    b: list[int] = []
    c: list[int]
    weights: list[float] = []
    parts: list[float] = []


class StoquasticityReport(BaseModel):
    stoquastic: bool
    max_negative_amplitude: float
    max_imaginary_part: float = 0.0


class DecayModel(BaseModel):
    """Rate function phi: ``exp(-k/xi)``, ``(1 + k/xi)**-alpha`` or the ideal Markov step."""

    kind: Literal["exponential", "power", "markov"]
    xi: Optional[float] = Field(default=None, gt=0)
    alpha: Optional[float] = Field(default=None, gt=0)
    l0: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_parameters(self) -> "DecayModel":
        if self.kind != "markov" and self.xi is None:
            raise ValueError(f"{self.kind} decay needs xi")
        if self.kind == "power" and self.alpha is None:
            raise ValueError("power decay needs alpha")
        return self

    def phi(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.float64)
        if self.kind == "exponential":
            return np.exp(-k / self.xi)
        if self.kind == "power":
            return (1.0 + k / self.xi) ** (-self.alpha)
        return np.where(k <= 0, 1.0, 0.0)


class DecayFit(BaseModel):
    model: Optional[DecayModel]
    max_relative_residual: float
    certificate: bool
    points: int
    reason: str = ""


class SweepRow(BaseModel):
    l: int
    delta: float
    vartheta: float
    one_minus_overlap: float
    tau: float
    entropy_diff: float


class SweepTable(BaseModel):
    rows: list[SweepRow]
    fits: dict[str, DecayFit]
    model: Optional[DecayModel] = None

    def column(self, name: str) -> list[float]:
        return [getattr(row, name) for row in self.rows]


class AreaLawBound(BaseModel):
    """Multiscale entropy bound for a regular region under a decay model."""

    rhs: float
    i1: float
    i2: float
    l0: int
    nu: int
    boundary_size: int
    C_d: float
    length_scale: float
    single_scale_denominator: Optional[float] = None


class RunHeader(BaseModel):
    """Provenance embedded in every output file."""

    config_hash: str
    version: str
    seed: int


class GroundStateSummary(BaseModel):
    energy: float
    gap: float
    excited_energy: Optional[float] = None
    degenerate: bool
    solver: str
    iterations: int
    residual: float
    sites: int
    stoquastic: Optional[StoquasticityReport] = None


class ApproximationSidecar(BaseModel):
    """Metadata stored next to a persisted buffer approximation."""

    a: list[int]
    b: list[int]
    c: list[int]
    vartheta: float
    iterations: int
    converged: bool
    renormalization: float
    overlap_real: Optional[float] = None
    overlap_imag: Optional[float] = None
