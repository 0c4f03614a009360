import json
import logging
from pathlib import Path
from typing import Any, Generic, TypeVar

from entanglab.core.errors import EntanglabError

T = TypeVar("T")

logger = logging.getLogger(__name__)


class BaseRepository(Generic[T]):
    """Base repository persisting one kind of artifact under an output directory."""

    suffix: str = ""

    def __init__(self, root: Path | str):
        self.root = Path(root)

    def path(self, name: str, suffix: str | None = None) -> Path:
        """Location of the artifact called ``name``."""
        return self.root / f"{name}{self.suffix if suffix is None else suffix}"

    def save(self, name: str, obj: T) -> Path:
        raise NotImplementedError

    def load(self, name: str) -> T:
        raise NotImplementedError

    def _write_bytes(self, path: Path, data: bytes) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        logger.info("wrote %s (%d bytes)", path, len(data))
        return path

    def _write_text(self, path: Path, text: str) -> Path:
        return self._write_bytes(path, text.encode())

    def _write_json(self, path: Path, payload: Any) -> Path:
        return self._write_text(path, json.dumps(payload, indent=2) + "\n")

    def _read_bytes(self, path: Path) -> bytes:
        if not path.is_file():
            raise EntanglabError(f"{path} not found")
        return path.read_bytes()

    def _read_json(self, path: Path) -> Any:
        try:
            return json.loads(self._read_bytes(path))
        except json.JSONDecodeError as exc:
            raise EntanglabError(f"{path} is not valid JSON: {exc}") from exc
