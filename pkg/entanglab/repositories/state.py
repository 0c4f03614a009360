import logging
from pathlib import Path

import numpy as np

from entanglab.core.errors import InvalidStateError
from entanglab.models import PureState, Window
from entanglab.repositories.base import BaseRepository

logger = logging.getLogger(__name__)

MAGIC = b"QPSV"
VERSION = 1
MAX_LOCAL_DIM = 4

# magic, version u32, local_dim u8, n_sites u16
HEADER = np.dtype([("magic", "S4"), ("version", "<u4"), ("local_dim", "u1"), ("n_sites", "<u2")])


def encode_state(psi: PureState) -> bytes:
    """QPSV bytes: header, dims as u16 each, then little-endian f64 (re, im) pairs."""
    header = np.array([(MAGIC, VERSION, psi.local_dim, psi.window.site_count)], dtype=HEADER)
    dims = np.asarray(psi.window.dims, dtype="<u2")
    return header.tobytes() + dims.tobytes() + np.asarray(psi.amplitudes, dtype="<c16").tobytes()


def decode_state(data: bytes) -> PureState:
    if len(data) < HEADER.itemsize:
        raise InvalidStateError("state file is truncated")
    header = np.frombuffer(data, dtype=HEADER, count=1)[0]
    if header["magic"] != MAGIC:
        raise InvalidStateError("not a QPSV state file")
    if header["version"] != VERSION:
        raise InvalidStateError(f"unsupported QPSV version {header['version']}")
    local_dim, n_sites = int(header["local_dim"]), int(header["n_sites"])
    if not 2 <= local_dim <= MAX_LOCAL_DIM:
        raise InvalidStateError(f"unsupported local dimension {local_dim}")
    offset = HEADER.itemsize
    remaining = len(data) - offset
    # window dimension is not stored; it is the number of u16 words left before the amplitudes
    size = local_dim**n_sites
    dims_bytes = remaining - 16 * size
    if dims_bytes <= 0 or dims_bytes % 2 or not 1 <= dims_bytes // 2 <= 3:
        raise InvalidStateError("state file has an inconsistent length")
    dims = tuple(int(d) for d in np.frombuffer(data, dtype="<u2", count=dims_bytes // 2, offset=offset))
    if int(np.prod(dims)) != n_sites:
        raise InvalidStateError(f"dims {list(dims)} do not multiply to {n_sites} sites")
    amplitudes = np.frombuffer(data, dtype="<c16", count=size, offset=offset + dims_bytes)
    return PureState(Window(dims), amplitudes.astype(np.complex128), local_dim)


class StateRepository(BaseRepository[PureState]):
    """QPSV state vectors."""

    suffix = ".qpsv"

    def save(self, name: str, obj: PureState) -> Path:
        return self._write_bytes(self.path(name), encode_state(obj))

    def load(self, name: str) -> PureState:
        psi = decode_state(self._read_bytes(self.path(name)))
        logger.debug("loaded %s on window %s", name, list(psi.window.dims))
        return psi
