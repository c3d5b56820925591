"""Binary encoding of named float64 arrays (dense parameters, optimizer state).

Layout, all little-endian::

    count u32
    record*  length u32 | name_len u16 | name utf-8 | ndim u8 | shape u32[ndim] | data f64[prod(shape)]

Records keep the insertion order of the mapping they came from.
"""

import struct
from typing import Dict

import numpy as np

COUNT = struct.Struct("<I")
LENGTH = struct.Struct("<I")
NAME_LEN = struct.Struct("<H")
NDIM = struct.Struct("<B")
F64 = np.dtype("<f8")


class CorruptDenseData(Exception):
    """Dense block bytes do not parse."""


class DenseCodec:

    def encode(self, arrays: Dict[str, np.ndarray]) -> bytes:
        chunks = [COUNT.pack(len(arrays))]
        for name, array in arrays.items():
            raw_name = name.encode("utf-8")
            a = np.ascontiguousarray(array, dtype=F64)
            payload = b"".join((
                NAME_LEN.pack(len(raw_name)),
                raw_name,
                NDIM.pack(a.ndim),
                struct.pack(f"<{a.ndim}I", *a.shape),
                a.tobytes(),
            ))
            chunks.append(LENGTH.pack(len(payload)))
            chunks.append(payload)
        return b"".join(chunks)

    def decode(self, data: bytes) -> Dict[str, np.ndarray]:
        try:
            (count,) = COUNT.unpack_from(data, 0)
            offset = COUNT.size
            arrays = {}
            for _ in range(count):
                (length,) = LENGTH.unpack_from(data, offset)
                offset += LENGTH.size
                end = offset + length
                if end > len(data):
                    raise CorruptDenseData(f"Record at byte {offset} runs past the end of the data")
                (name_len,) = NAME_LEN.unpack_from(data, offset)
                cursor = offset + NAME_LEN.size
                name = data[cursor:cursor + name_len].decode("utf-8")
                cursor += name_len
                (ndim,) = NDIM.unpack_from(data, cursor)
                cursor += NDIM.size
                shape = struct.unpack_from(f"<{ndim}I", data, cursor)
                cursor += 4 * ndim
                size = int(np.prod(shape)) if ndim else 1
                arrays[name] = np.frombuffer(data, dtype=F64, count=size, offset=cursor).reshape(shape).astype(np.float64)
                offset = end
        except struct.error as e:
            raise CorruptDenseData(f"Truncated dense block: {e}") from e
        return arrays
