from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from ..store.feature_key import FeatureKey


@dataclass
class PacketSection:
    """Updated vectors of one table."""

    table_id: int

    #: (id, vector) pairs in ascending id order
    entries: List[Tuple[int, np.ndarray]] = field(default_factory=list)


@dataclass
class SyncPacket:
    """One incremental push from a training shard to its serving shard.

    Vectors are value copies. Optimizer state never crosses the wire.
    """

    #: Index of the training shard that built the packet
    source: int

    #: Monotone per source, guards against redelivery
    version: int

    sections: List[PacketSection] = field(default_factory=list)

    #: Named dense arrays, present only on dense syncs
    dense: Optional[Dict[str, np.ndarray]] = None

    #: Event time the packet was built at
    created_at: float = 0.0

    def num_keys(self) -> int:
        return sum(len(section.entries) for section in self.sections)

    def keys(self) -> Set[FeatureKey]:
        return {FeatureKey(section.table_id, key) for section in self.sections for key, _ in section.entries}

    def has_dense(self) -> bool:
        return self.dense is not None
