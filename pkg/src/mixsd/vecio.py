"""Binary vector files.

Layout: 8 ASCII magic bytes "MSDVEC01", one u8 dtype code (0 = 32-bit
float, 1 = 64-bit float), 7 reserved zero bytes, a little-endian u64
element count, then the raw little-endian values.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import VectorFormatError
from .fileio import atomic_write

MAGIC = b"MSDVEC01"
HEADER_SIZE = 8 + 1 + 7 + 8
DTYPE_CODES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
CODES_BY_KIND = {"f4": 0, "f8": 1}


def write_vector(path: str | Path, values: np.ndarray, dtype: str = "f8") -> None:
    if dtype not in CODES_BY_KIND:
        raise VectorFormatError(f"unsupported dtype {dtype!r}")
    arr = np.ascontiguousarray(values, dtype=np.dtype(f"<{dtype}"))
    if arr.ndim != 1:
        raise VectorFormatError("only 1-d vectors are written")
    with atomic_write(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<B7x", CODES_BY_KIND[dtype]))
        fh.write(struct.pack("<Q", arr.size))
        fh.write(arr.tobytes())


def read_header(path: str | Path) -> tuple[np.dtype, int]:
    with open(path, "rb") as fh:
        head = fh.read(HEADER_SIZE)
    if len(head) < HEADER_SIZE:
        raise VectorFormatError(f"{path}: truncated header")
    if head[:8] != MAGIC:
        raise VectorFormatError(f"{path}: bad magic {head[:8]!r}")
    code = head[8]
    if code not in DTYPE_CODES:
        raise VectorFormatError(f"{path}: unknown dtype code {code}")
    if any(head[9:16]):
        raise VectorFormatError(f"{path}: reserved bytes must be zero")
    (count,) = struct.unpack("<Q", head[16:24])
    return DTYPE_CODES[code], count


def element_count(path: str | Path) -> int:
    return read_header(path)[1]


def read_vector(path: str | Path) -> np.ndarray:
    dtype, count = read_header(path)
    data = np.fromfile(path, dtype=dtype, count=count, offset=HEADER_SIZE)
    if data.size != count:
        raise VectorFormatError(f"{path}: expected {count} values, found {data.size}")
    return data


def iter_chunks(path: str | Path, chunk_size: int = 1 << 20) -> Iterator[np.ndarray]:
    """Stream the vector in fixed-size chunks (native dtype)."""
    dtype, count = read_header(path)
    offset = HEADER_SIZE
    remaining = count
    while remaining > 0:
        take = min(chunk_size, remaining)
        chunk = np.fromfile(path, dtype=dtype, count=take, offset=offset)
        if chunk.size != take:
            raise VectorFormatError(f"{path}: truncated payload")
        yield chunk
        offset += take * dtype.itemsize
        remaining -= take
