"""GRD1 binary grid files and atomic output helpers.

Layout (little-endian):

    magic  b"GRD1"
    u32    channel count
    u32    H
    u32    W
    f64    dx
    per channel: u32 name length, then UTF-8 name bytes
    f64[channels * H * W] values, row-major (channel, row, col)
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .errors import GrdFormatError
from .fields import GridField, make_field

MAGIC = b"GRD1"
_HEADER = struct.Struct("<III d")


def field_to_bytes(field: GridField) -> bytes:
    parts = [MAGIC, _HEADER.pack(field.n_channels, field.height, field.width, field.dx)]
    for name in field.channel_names:
        encoded = name.encode("utf-8")
        parts.append(struct.pack("<I", len(encoded)))
        parts.append(encoded)
    parts.append(np.ascontiguousarray(field.values, dtype="<f8").tobytes())
    return b"".join(parts)


def field_from_bytes(data: bytes, source: str = "<bytes>") -> GridField:
    if data[:4] != MAGIC:
        raise GrdFormatError(f"{source}: bad magic {data[:4]!r}, expected {MAGIC!r}")
    offset = 4
    try:
        n_channels, height, width, dx = _HEADER.unpack_from(data, offset)
        offset += _HEADER.size
        names = []
        for _ in range(n_channels):
            (name_len,) = struct.unpack_from("<I", data, offset)
            offset += 4
            if offset + name_len > len(data):
                raise struct.error("name block past end of file")
            names.append(data[offset : offset + name_len].decode("utf-8"))
            offset += name_len
    except struct.error as exc:
        raise GrdFormatError(f"{source}: truncated header ({exc})") from None
    n_values = n_channels * height * width
    payload = data[offset:]
    if len(payload) < 8 * n_values:
        raise GrdFormatError(
            f"{source}: truncated payload, expected {8 * n_values} value bytes, "
            f"got {len(payload)}"
        )
    if len(payload) > 8 * n_values:
        raise GrdFormatError(f"{source}: {len(payload) - 8 * n_values} trailing bytes")
    values = np.frombuffer(payload, dtype="<f8", count=n_values)
    try:
        return make_field(values, height, width, dx, names)
    except ValueError as exc:
        raise GrdFormatError(f"{source}: invalid field ({exc})") from None


def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_grd(path: str, field: GridField) -> None:
    atomic_write_bytes(path, field_to_bytes(field))


def read_grd(path: str) -> GridField:
    with open(path, "rb") as handle:
        data = handle.read()
    return field_from_bytes(data, source=path)
