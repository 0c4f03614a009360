from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Parallelism for sparse Hamiltonian application
    THREADS: int = 1
    LOG_LEVEL: str = "WARNING"

    # Capacity guardrails - exceeding them raises CapacityError
    MAX_STATE_SITES: int = 24
    MAX_AUDIT_SITES: int = 14
    MAX_ORACLE_SITES: int = 8
    MAX_KERNEL_FREE_SITES: int = 12
    DENSE_SOLVER_SITES: int = 10

    # Numerical thresholds
    AUDIT_SLACK: float = 1e-10
    ZERO_AMPLITUDE: float = 1e-14
    NULL_EVENT: float = 1e-300
    DEGENERACY_GAP: float = 1e-8
    SOLVER_RESIDUAL: float = 1e-10
    SOLVER_MAX_ITERATIONS: int = 20000
    PHASE_TOLERANCE: float = 1e-12
    PHASE_MAX_ROUNDS: int = 500
    CERTIFICATE_RESIDUAL: float = 0.25

    model_config = SettingsConfigDict(env_prefix="ENTANGLAB_", env_file=".env", extra="ignore")

    @model_validator(mode="after")
    def check_limits(self) -> "Settings":
        """Keep the guardrails mutually consistent."""
        if self.THREADS < 1:
            raise ValueError("THREADS must be at least 1")
        if not (self.MAX_ORACLE_SITES <= self.MAX_AUDIT_SITES <= self.MAX_STATE_SITES):
            raise ValueError("capacity limits must satisfy oracle <= audit <= state")
        return self


settings = Settings()
