"""The simulated wire between training and serving shards.

Layout, all little-endian::

    header   source u32 | version u64 | section count u32
    section* table_id u32 | entry count u32 | (key u64 | vector f32[dim])*
    dense    length u64 | dense block (0 length when absent)
    trailer  created_at f64

Entry dims are not on the wire; the decoder takes them from the table
configuration both sides share.
"""

import struct
from typing import Mapping

import numpy as np

from ..model.tools.dense_codec import DenseCodec
from .sync_packet import PacketSection, SyncPacket

HEADER = struct.Struct("<IQI")
SECTION = struct.Struct("<II")
KEY = struct.Struct("<Q")
DENSE_LENGTH = struct.Struct("<Q")
TRAILER = struct.Struct("<d")
F32 = np.dtype("<f4")


class CorruptPacket(Exception):
    """Packet bytes do not parse."""


class PacketCodec:

    def encode(self, packet: SyncPacket) -> bytes:
        chunks = [HEADER.pack(packet.source, packet.version, len(packet.sections))]
        for section in packet.sections:
            chunks.append(SECTION.pack(section.table_id, len(section.entries)))
            for key, vector in section.entries:
                chunks.append(KEY.pack(key))
                chunks.append(np.ascontiguousarray(vector, dtype=F32).tobytes())
        if not packet.has_dense():
            chunks.append(DENSE_LENGTH.pack(0))
        else:
            dense = DenseCodec().encode(packet.dense)
            chunks.append(DENSE_LENGTH.pack(len(dense)))
            chunks.append(dense)
        chunks.append(TRAILER.pack(packet.created_at))
        return b"".join(chunks)

    def decode(self, data: bytes, dims: Mapping[int, int]) -> SyncPacket:
        """
        :param dims:
            Vector width of every table the packet may carry
        """
        try:
            source, version, count = HEADER.unpack_from(data, 0)
            offset = HEADER.size
            sections = []
            for _ in range(count):
                table_id, entries = SECTION.unpack_from(data, offset)
                offset += SECTION.size
                if table_id not in dims:
                    raise CorruptPacket(f"Packet carries unknown table {table_id}")
                dim = dims[table_id]
                section = PacketSection(table_id)
                for _ in range(entries):
                    (key,) = KEY.unpack_from(data, offset)
                    offset += KEY.size
                    if offset + 4 * dim > len(data):
                        raise CorruptPacket(f"Vector of key {key} runs past the end of the packet")
                    vector = np.frombuffer(data, dtype=F32, count=dim, offset=offset).astype(np.float32)
                    offset += 4 * dim
                    section.entries.append((key, vector))
                sections.append(section)
            (length,) = DENSE_LENGTH.unpack_from(data, offset)
            offset += DENSE_LENGTH.size
            dense = None
            if length:
                dense = DenseCodec().decode(data[offset:offset + length])
                offset += length
            (created_at,) = TRAILER.unpack_from(data, offset)
        except struct.error as e:
            raise CorruptPacket(f"Truncated packet: {e}") from e
        return SyncPacket(source, version, sections, dense, created_at)
