import logging
from collections import Counter, defaultdict
from typing import TYPE_CHECKING, Dict, Iterable, Optional

import numpy as np

from ..enums.sync_action_enum import SyncActionEnum as SyncAction
from ..model.dense_params import DenseParams
from ..store.feature_key import FeatureKey
from .packet_codec import PacketCodec
from .stale_packet import StalePacket
from .sync_packet import PacketSection, SyncPacket

if TYPE_CHECKING:
    from ..ps.ps_cluster import PSCluster
    from ..ps.ps_shard import PSShard

logger = logging.getLogger(__name__)

#: Bytes of a key on the wire
KEY_BYTES = 8


def estimate_packet_bytes(num_keys: int, dim: int, bytes_per_element: int = 4, exact: bool = False) -> int:
    """Payload size of a sparse sync.

    The approximate form counts vectors only. `exact` adds the 8-byte key
    of every entry.
    """
    assert num_keys >= 0 and dim >= 1 and bytes_per_element >= 1, "Sizes must be positive"
    per_key = dim * bytes_per_element + (KEY_BYTES if exact else 0)
    return num_keys * per_key


class ParameterSync:

    """Pushes touched parameters from training shards to serving shards.

    Each training shard's touched keys are drained and packed into a
    :py:class:`SyncPacket`, the packet goes through the byte encoding and
    is applied to the serving shard with the same index. Packet versions
    are a per-source sequence, a serving shard rejects anything not newer
    than what it already applied from that source.
    """

    def __init__(self):
        self.__sequence: Dict[int, int] = defaultdict(int)
        self.__counters = Counter()

    def get_counters(self) -> Dict[str, int]:
        counters = {name: 0 for name in ("packets", "bytes", "keys", "skipped", "stale", "dense_syncs")}
        counters.update(self.__counters)
        return counters

    def build_sparse_packet(
        self,
        shard: "PSShard",
        keys: Iterable[FeatureKey],
        now: float,
        dense: Optional[DenseParams] = None,
    ) -> SyncPacket:
        """Snapshot the current vectors of drained keys.

        Keys evicted between being touched and drained are skipped and
        counted.
        """
        by_table = defaultdict(list)
        for key in keys:
            by_table[key.table_id].append(key.id)

        self.__sequence[shard.get_index()] += 1
        packet = SyncPacket(shard.get_index(), self.__sequence[shard.get_index()], created_at=float(now))
        for table_id in sorted(by_table):
            section = PacketSection(table_id)
            for key_id in sorted(by_table[table_id]):
                vector = shard.lookup_vector(table_id, key_id)
                if vector is None:
                    self.__counters["skipped"] += 1
                    continue
                section.entries.append((key_id, vector.copy()))
            if section.entries:
                packet.sections.append(section)
        if dense is not None:
            packet.dense = {name: array.copy() for name, array in dense.named_arrays().items()}
        return packet

    def apply_packet(self, shard: "PSShard", packet: SyncPacket):
        """Upsert every packet vector into a serving shard.

        :raise StalePacket:
            The packet version is not newer than the last one applied from
            its source
        """
        assert shard.is_serving(), "Packets only go to serving shards"
        last = shard.get_last_applied(packet.source)
        if packet.version <= last:
            self.__counters["stale"] += 1
            raise StalePacket(packet.source, packet.version, last)

        for section in packet.sections:
            table = shard.get_or_create_table(section.table_id)
            for key_id, vector in section.entries:
                table.upsert_vector(FeatureKey(section.table_id, key_id), vector, packet.created_at)
        if packet.has_dense():
            shard.set_dense(DenseParams.from_named_arrays(packet.dense))
            self.__counters["dense_syncs"] += 1

        shard.set_last_applied(packet.source, packet.version)
        shard.bump_version()

    def sync(self, cluster: "PSCluster", action: str, now: float) -> int:
        """Drain every training shard into its serving shard.

        :param action:
            :py:class:`SyncActionEnum` from the schedule, the dense block
            travels with shard 0's packet on `SPARSE_AND_DENSE`

        :return:
            Bytes put on the wire
        """
        if action == SyncAction.NONE:
            return 0

        codec = PacketCodec()
        total = 0
        dims = None
        for index in range(cluster.get_num_shards()):
            training = cluster.training_shard(index)
            dense = None
            if action == SyncAction.SPARSE_AND_DENSE and training.get_dense() is not None:
                dense = training.get_dense()
            packet = self.build_sparse_packet(training, training.get_touched().drain(), now, dense)
            data = codec.encode(packet)
            if dims is None:
                dims = cluster.table_dims()
            try:
                self.apply_packet(cluster.serving_shard(index), codec.decode(data, dims))
            except StalePacket as e:
                logger.warning("%s", e)
                continue
            total += len(data)
            self.__counters["packets"] += 1
            self.__counters["keys"] += packet.num_keys()
        self.__counters["bytes"] += total
        logger.debug("Sync %s at %s moved %d bytes", action, now, total)
        return total

    def staleness(self, cluster: "PSCluster") -> Dict[str, np.ndarray]:
        """Elementwise gap between training and serving dense params."""
        training = cluster.get_dense().named_arrays()
        serving = cluster.get_serving_dense().named_arrays()
        return {name: training[name] - serving[name] for name in training}
