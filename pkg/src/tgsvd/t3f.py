"""Binary tensor files ("T3F").

Layout: the 8-byte magic ``T3TENSOR``, three little-endian ``uint64`` dims
``I1, I2, I3``, then ``I1*I2*I3`` little-endian doubles in frontal-slice-major,
column-major-within-slice order (Fortran order of an ``(I1, I2, I3)`` array).
"""

import struct

import numpy as np

from .errors import T3FFormatError
from .tensor_core import as_tensor3

MAGIC = b"T3TENSOR"
_HEADER = struct.Struct("<8s3Q")


def to_bytes(x):
    x = as_tensor3(x)
    payload = np.asarray(x, dtype="<f8").ravel(order="F").tobytes()
    return _HEADER.pack(MAGIC, *x.shape) + payload


def from_bytes(buf):
    if len(buf) < _HEADER.size:
        raise T3FFormatError(f"T3F header needs {_HEADER.size} bytes, got {len(buf)}")
    magic, n1, n2, n3 = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise T3FFormatError(f"bad T3F magic {magic!r}")
    count = n1 * n2 * n3
    expected = _HEADER.size + 8 * count
    if len(buf) < expected:
        raise T3FFormatError(f"short T3F payload: expected {expected} bytes, got {len(buf)}")
    if len(buf) > expected:
        raise T3FFormatError(f"trailing bytes after T3F payload ({len(buf) - expected})")
    data = np.frombuffer(buf, dtype="<f8", count=count, offset=_HEADER.size)
    return as_tensor3(data.reshape((n1, n2, n3), order="F").astype(np.float64))


def write_t3f(path, x):
    with open(path, "wb") as fh:
        fh.write(to_bytes(x))


def read_t3f(path):
    with open(path, "rb") as fh:
        return from_bytes(fh.read())
