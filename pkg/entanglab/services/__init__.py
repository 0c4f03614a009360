from entanglab.services.audit import AuditService
from entanglab.services.ground import GroundStateService
from entanglab.services.model import ModelService
from entanglab.services.oracle import OracleService
from entanglab.services.scan import ScanService

__all__ = [
    "ModelService",
    "GroundStateService",
    "ScanService",
    "AuditService",
    "OracleService",
]
