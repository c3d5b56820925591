"""Binary encoding of one embedding table.

Layout, all little-endian::

    header   table_id u32 | dim u32 | config digest u64
    record*  length u32 | key u64 | dim u32 | vector f32[dim] | accumulator f32[dim] | last_update f64

Records are written in ascending key order so equal tables encode to
equal bytes.
"""

import io
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Tuple

import numpy as np

from ..embedding_entry import EmbeddingEntry
from ..embedding_table import EmbeddingTable

HEADER = struct.Struct("<IIQ")
LENGTH = struct.Struct("<I")
KEY_DIM = struct.Struct("<QI")
TIMESTAMP = struct.Struct("<d")
F32 = np.dtype("<f4")


@dataclass(frozen=True)
class TableHeader:

    table_id: int

    dim: int

    #: :py:meth:`TableConfig.digest` of the table that was written
    config_digest: int


class CorruptTableData(Exception):
    """Table bytes do not parse."""


class TableCodec:

    def encode(self, table: EmbeddingTable) -> bytes:
        out = io.BytesIO()
        self.write(table, out)
        return out.getvalue()

    def write(self, table: EmbeddingTable, out: BinaryIO) -> int:
        """Stream a table into `out`.

        :return:
            Number of records written
        """
        config = table.get_config()
        out.write(HEADER.pack(table.get_table_id(), config.dim, config.digest()))
        items = table.snapshot_items()
        for key, entry in items:
            payload = b"".join((
                KEY_DIM.pack(key, config.dim),
                np.ascontiguousarray(entry.vector, dtype=F32).tobytes(),
                np.ascontiguousarray(entry.accumulator, dtype=F32).tobytes(),
                TIMESTAMP.pack(entry.last_update),
            ))
            out.write(LENGTH.pack(len(payload)))
            out.write(payload)
        return len(items)

    def read_header(self, data: bytes) -> TableHeader:
        if len(data) < HEADER.size:
            raise CorruptTableData(f"Table data is {len(data)} bytes, shorter than its header")
        return TableHeader(*HEADER.unpack_from(data, 0))

    def records(self, data: bytes) -> Iterator[Tuple[int, EmbeddingEntry]]:
        header = self.read_header(data)
        offset = HEADER.size
        while offset < len(data):
            if offset + LENGTH.size > len(data):
                raise CorruptTableData(f"Truncated record length at byte {offset}")
            (length,) = LENGTH.unpack_from(data, offset)
            offset += LENGTH.size
            end = offset + length
            if end > len(data):
                raise CorruptTableData(f"Record at byte {offset} runs past the end of the data")
            key, dim = KEY_DIM.unpack_from(data, offset)
            if dim != header.dim:
                raise CorruptTableData(f"Record for key {key} has dim {dim}, table dim is {header.dim}")
            cursor = offset + KEY_DIM.size
            vector = np.frombuffer(data, dtype=F32, count=dim, offset=cursor).astype(np.float32)
            cursor += 4 * dim
            accumulator = np.frombuffer(data, dtype=F32, count=dim, offset=cursor).astype(np.float32)
            cursor += 4 * dim
            (last_update,) = TIMESTAMP.unpack_from(data, cursor)
            offset = end
            yield key, EmbeddingEntry(vector, accumulator, last_update)
