"""Exception hierarchy.

Every error carries a human readable ``detail`` and the process ``exit_code`` the CLI
returns when the error escapes a subcommand.
"""


class EntanglabError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigError(EntanglabError):
    exit_code = 2


class CapacityError(EntanglabError):
    exit_code = 3

    def __init__(self, dimension: str, value: int, limit: int):
        super().__init__(f"capacity exceeded: {dimension}={value} exceeds limit {limit}")
        self.dimension = dimension
        self.value = value
        self.limit = limit


class AuditFailure(EntanglabError):
    exit_code = 4


class RegionError(EntanglabError):
    pass


class NullEventError(EntanglabError):
    def __init__(self, detail: str = "conditioning on null event"):
        super().__init__(detail)


class InvalidStateError(EntanglabError):
    pass


class ConvergenceError(EntanglabError):
    pass


class DegenerateStateError(EntanglabError):
    pass


def check_capacity(dimension: str, value: int, limit: int) -> None:
    """Raise CapacityError when ``value`` exceeds ``limit``."""
    if value > limit:
        raise CapacityError(dimension, value, limit)
