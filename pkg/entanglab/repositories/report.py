import csv
import io
from pathlib import Path
from typing import Any, Sequence

from pydantic import BaseModel

from entanglab.repositories.base import BaseRepository
from entanglab.schemas.report import RunHeader, SweepTable

SWEEP_COLUMNS = ("l", "delta", "vartheta", "one_minus_overlap", "tau", "entropy_diff")


class ReportRepository(BaseRepository[list[BaseModel]]):
    """JSON report bundles and CSV tables, each carrying the run header."""

    suffix = ".json"

    def __init__(self, root: Path | str, header: RunHeader):
        super().__init__(root)
        self.header = header

    def save(self, name: str, obj: Sequence[BaseModel]) -> Path:
        """``{"header": ..., "reports": [...]}`` with reports in the given order."""
        return self.save_json(name, [report.model_dump(mode="json") for report in obj], key="reports")

    def save_json(self, name: str, payload: Any, key: str = "data") -> Path:
        return self._write_json(self.path(name), {"header": self.header.model_dump(), key: payload})

    def load(self, name: str) -> list[dict]:
        return self._read_json(self.path(name))["reports"]

    def load_header(self, name: str) -> RunHeader:
        return RunHeader(**self._read_json(self.path(name))["header"])

    def save_rows(self, name: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        """CSV with the header as leading ``#`` comment lines."""
        buffer = io.StringIO()
        for field, value in self.header.model_dump().items():
            buffer.write(f"# {field}={value}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
        return self._write_text(self.path(name, ".csv"), buffer.getvalue())

    def save_sweep(self, name: str, table: SweepTable) -> tuple[Path, Path]:
        """Sweep CSV plus a JSON file with the column fits and the attached decay model."""
        rows = [[getattr(row, column) for column in SWEEP_COLUMNS] for row in table.rows]
        csv_path = self.save_rows(name, SWEEP_COLUMNS, rows)
        fits = {
            "fits": {column: fit.model_dump(mode="json") for column, fit in table.fits.items()},
            "model": table.model.model_dump(mode="json") if table.model else None,
        }
        return csv_path, self.save_json(f"{name}_fits", fits, key="decay")

    def load_rows(self, name: str) -> tuple[dict[str, str], list[dict[str, str]]]:
        """Header fields and data rows of a CSV written by :meth:`save_rows`."""
        lines = self._read_bytes(self.path(name, ".csv")).decode().splitlines()
        header = dict(line[2:].split("=", 1) for line in lines if line.startswith("# "))
        return header, list(csv.DictReader(line for line in lines if not line.startswith("#")))


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)
