from entanglab.repositories.base import BaseRepository
from entanglab.repositories.approximation import ApproximationRepository
from entanglab.repositories.report import ReportRepository
from entanglab.repositories.state import StateRepository

__all__ = [
    "BaseRepository",
    "StateRepository",
    "ReportRepository",
    "ApproximationRepository",
]
