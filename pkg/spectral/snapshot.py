"""LPTF snapshot files: 16-byte header followed by float64 samples."""

from __future__ import annotations

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from errors import EmitError, SnapshotFormatError

from .fields import PhysicalField
from .grid import TorusGrid

logger = logging.getLogger(__name__)

MAGIC = b"LPTF"
VERSION = 1
_HEADER = struct.Struct("<4sBBHII")


def encode_snapshot(field: PhysicalField) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, field.grid.d, 0, field.grid.n, 0)
    return header + np.ascontiguousarray(field.values, dtype="<f8").tobytes()


def decode_snapshot(payload: bytes) -> PhysicalField:
    if len(payload) < _HEADER.size:
        raise SnapshotFormatError(f"snapshot shorter than its {_HEADER.size}-byte header")
    magic, version, d, _, n, _ = _HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    try:
        grid = TorusGrid(d=d, n=n)
    except ValidationError as exc:
        raise SnapshotFormatError(f"invalid grid in header (d={d}, n={n})") from exc
    body = payload[_HEADER.size :]
    expected = grid.size * 8
    if len(body) != expected:
        raise SnapshotFormatError(f"payload holds {len(body)} bytes, expected {expected}")
    values = np.frombuffer(body, dtype="<f8").astype(float)
    if not np.all(np.isfinite(values)):
        raise SnapshotFormatError("snapshot contains non-finite samples")
    return PhysicalField(grid, values)


def write_snapshot(path: Union[str, Path], field: PhysicalField) -> Path:
    target = Path(path).expanduser()
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(encode_snapshot(field))
    except OSError as exc:
        raise EmitError(f"could not write snapshot to {target}: {exc}", path=str(target)) from exc
    logger.info("Wrote snapshot n=%d d=%d to %s", field.grid.n, field.grid.d, target)
    return target


def read_snapshot(path: Union[str, Path]) -> PhysicalField:
    source = Path(path).expanduser()
    try:
        payload = source.read_bytes()
    except OSError as exc:
        raise EmitError(f"could not read snapshot {source}: {exc}", path=str(source)) from exc
    return decode_snapshot(payload)


__all__ = ["MAGIC", "VERSION", "encode_snapshot", "decode_snapshot", "write_snapshot", "read_snapshot"]
