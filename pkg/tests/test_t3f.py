import struct

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from tgsvd.errors import T3FFormatError
from tgsvd.t3f import from_bytes, read_t3f, to_bytes, write_t3f


def test_layout_is_frontal_slice_major():
    x = np.arange(12, dtype=float).reshape((2, 3, 2), order="F")
    buf = to_bytes(x)
    assert buf[:8] == b"T3TENSOR"
    assert struct.unpack("<3Q", buf[8:32]) == (2, 3, 2)
    data = np.frombuffer(buf[32:], dtype="<f8")
    # first slice column by column, then the second slice
    assert_array_equal(data[:6], x[:, :, 0].ravel(order="F"))
    assert_array_equal(data, np.arange(12))


def test_roundtrip_file(tmp_path, rng):
    x = rng.standard_normal((3, 4, 5))
    path = tmp_path / "x.t3f"
    write_t3f(path, x)
    assert path.stat().st_size == 32 + 8 * 60
    assert_array_equal(read_t3f(path), x)


def test_bad_magic(rng):
    buf = bytearray(to_bytes(rng.standard_normal((2, 2, 2))))
    buf[:8] = b"T3TENSOX"
    with pytest.raises(T3FFormatError):
        from_bytes(bytes(buf))


def test_short_payload(rng):
    buf = to_bytes(rng.standard_normal((2, 2, 2)))
    with pytest.raises(T3FFormatError):
        from_bytes(buf[:-8])
    with pytest.raises(T3FFormatError):
        from_bytes(buf[:20])


def test_trailing_bytes(rng):
    with pytest.raises(T3FFormatError):
        from_bytes(to_bytes(rng.standard_normal((2, 2, 2))) + b"\0")
