from typing import Annotated, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from entanglab.models import Region, Window

Dims = Annotated[list[PositiveInt], Field(min_length=1, max_length=3)]


class RegionSpec(BaseModel):
    """Inclusive coordinate box ``{"lo": [..], "hi": [..]}`` or an explicit site list."""

    lo: Optional[list[int]] = None
    hi: Optional[list[int]] = None
    sites: Optional[list[Annotated[int, Field(ge=0)]]] = None

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={"examples": [{"lo": [0], "hi": [3]}, {"sites": [5, 6, 7, 8]}]},
    )

    @model_validator(mode="after")
    def check_form(self) -> "RegionSpec":
        boxed = self.lo is not None or self.hi is not None
        if boxed == (self.sites is not None):
            raise ValueError("give either lo/hi or sites")
        if boxed and (self.lo is None or self.hi is None):
            raise ValueError("a box needs both lo and hi")
        return self

    def resolve(self, window: Window) -> Region:
        if self.sites is not None:
            return Region(window, tuple(self.sites))
        return window.box(self.lo, self.hi)


class CouplingSpec(BaseModel):
    offset: Annotated[list[int], Field(min_length=1, max_length=3)]
    J: float

    @field_validator("offset")
    @classmethod
    def nonzero_offset(cls, v: list[int]) -> list[int]:
        if not any(v):
            raise ValueError("offset must be nonzero")
        return v


class _LatticeSpec(BaseModel):
    dims: Dims
    couplings: list[CouplingSpec] = []

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def offsets_match_dims(self):
        for coupling in self.couplings:
            if len(coupling.offset) != len(self.dims):
                raise ValueError(f"coupling offset {coupling.offset} does not match dims {self.dims}")
        return self

    @property
    def window(self) -> Window:
        return Window(tuple(self.dims))

    @property
    def interaction_range(self) -> int:
        return max((sum(abs(x) for x in c.offset) for c in self.couplings if c.J != 0), default=0)


class IsingSpec(_LatticeSpec):
    """Transverse-field Ising model with finite-range ferromagnetic couplings."""

    kind: Literal["ising"] = "ising"
    b: Annotated[float, Field(ge=0)]
    hz: float = 0.0
    boundary_hz: float = 0.0

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "examples": [{"kind": "ising", "dims": [12], "couplings": [{"offset": [1], "J": 1.0}], "b": 2.0}]
        },
    )

    @field_validator("couplings")
    @classmethod
    def ferromagnetic(cls, v: list[CouplingSpec]) -> list[CouplingSpec]:
        if any(c.J < 0 for c in v):
            raise ValueError("Ising couplings must be ferromagnetic (J >= 0)")
        return v

    @property
    def ferromagnetic_measure(self) -> bool:
        return self.hz >= 0 and self.boundary_hz >= 0


class GibbsSpec(_LatticeSpec):
    """Square root of a classical Gibbs measure, optionally with an additive phase.

    ``p ~ exp(beta * (sum J s_u s_{u+o} + h sum s_u))`` and
    ``theta = sum K s_u s_{u+o} + phase_field sum s_u``.
    """

    kind: Literal["gibbs"] = "gibbs"
    beta: Annotated[float, Field(ge=0)] = 1.0
    h: float = 0.0
    phase_couplings: list[CouplingSpec] = []
    phase_field: float = 0.0

    @property
    def phase_range(self) -> int:
        return max((sum(abs(x) for x in c.offset) for c in self.phase_couplings if c.J != 0), default=0)

    @property
    def ferromagnetic_measure(self) -> bool:
        return all(c.J >= 0 for c in self.couplings) and self.h >= 0


class HandStateSpec(BaseModel):
    kind: Literal["hand"] = "hand"
    name: Literal["ghz", "bell", "product", "sign"]
    dims: Optional[Dims] = None
    angles: Optional[list[float]] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def default_dims(self) -> "HandStateSpec":
        if self.dims is None:
            defaults = {"ghz": [3], "bell": [2], "sign": [1]}
            if self.name == "product":
                if self.angles is None:
                    raise ValueError("a product state needs angles")
                self.dims = [len(self.angles)]
            else:
                self.dims = defaults[self.name]
        if self.name == "bell" and self.dims != [2]:
            raise ValueError("a Bell pair lives on dims [2]")
        return self

    @property
    def window(self) -> Window:
        return Window(tuple(self.dims))

    @property
    def ferromagnetic_measure(self) -> bool:
        return self.name in ("ghz", "bell", "product")


class RandomStateSpec(BaseModel):
    """Haar-random pure state; the experiment seed drives it."""

    kind: Literal["random"] = "random"
    dims: Dims
    real: bool = False

    model_config = ConfigDict(extra="forbid")

    @property
    def window(self) -> Window:
        return Window(tuple(self.dims))

    @property
    def ferromagnetic_measure(self) -> bool:
        return False


ModelSpec = Annotated[IsingSpec | GibbsSpec | HandStateSpec | RandomStateSpec, Field(discriminator="kind")]
