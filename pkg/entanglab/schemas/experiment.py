import hashlib
import json
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from .model import IsingSpec, ModelSpec, RegionSpec


class ExperimentConfig(BaseModel):
    """One experiment: a state generator, the regions it is probed on, and sweep parameters."""

    model: ModelSpec
    regions: dict[str, RegionSpec] = {}
    widths: list[PositiveInt] = [1]
    experiment: Optional[Literal["ground", "entropy-scan", "buffer-scan", "mutual-info", "audit", "oracle"]] = None
    seed: int = 0
    out_dir: str = "results"
    accept_degenerate: bool = False

    # entropy-scan
    block_sizes: Optional[list[PositiveInt]] = None
    renyi_orders: list[Annotated[float, Field(gt=0)]] = [2.0]

    # mutual-info
    block: PositiveInt = 2
    separations: list[Annotated[int, Field(ge=1)]] = [1, 2, 3, 4]
    observables: list[Literal["x", "z"]] = ["z", "x"]

    # audit / oracle
    max_domain: Annotated[int, Field(ge=0)] = 2
    kernel_mode: Literal["exact", "restricted"] = "restricted"
    kernel_exclude_targets: bool = False
    grid_steps: Annotated[int, Field(ge=4)] = 64
    l0: Optional[Annotated[int, Field(ge=0)]] = None

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "examples": [
                {
                    "model": {"kind": "ising", "dims": [12], "couplings": [{"offset": [1], "J": 1.0}], "b": 2.0},
                    "regions": {"a": {"lo": [0], "hi": [3]}},
                    "widths": [1, 2, 3, 4],
                    "seed": 7,
                }
            ]
        },
    )

    @field_validator("widths")
    @classmethod
    def increasing_widths(cls, v: list[int]) -> list[int]:
        if any(later <= earlier for earlier, later in zip(v, v[1:])):
            raise ValueError("widths must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_regions(self) -> "ExperimentConfig":
        """Every named region must resolve inside the model's window."""
        window = self.model.window
        for name, spec in self.regions.items():
            try:
                spec.resolve(window)
            except Exception as exc:
                raise ValueError(f"region {name!r}: {getattr(exc, 'detail', exc)}") from exc
        return self

    @property
    def is_ising(self) -> bool:
        return isinstance(self.model, IsingSpec)

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form (sorted keys, no whitespace), output directory excluded."""
        canonical = json.dumps(self.model_dump(mode="json", exclude={"out_dir"}), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()
