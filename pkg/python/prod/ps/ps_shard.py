import logging
import threading
from typing import Callable, Dict, Iterator, Optional

import numpy as np

from ..enums.role_enum import RoleEnum as Role
from ..model.adam_optimizer import AdamOptimizer
from ..model.dense_params import DenseParams
from ..store.embedding_table import EmbeddingTable
from ..store.table_config import TableConfig
from ..sync.touched_keys import TouchedKeys
from ..utils.seeding import SeedExpander

logger = logging.getLogger(__name__)

#: Maps a table id to the configuration its table is created with
TableConfigResolver = Callable[[int], TableConfig]


class PSShard:

    """One parameter-server shard in the training or serving role.

    - Sparse tables are created on first use from `config_of`
    - A training shard collects touched keys for incremental sync
    - The dense block (and on training shards its Adam state) is only
      held by shard 0 of a cluster
    - `version` grows by one per applied update batch or sync packet
    """

    def __init__(
        self,
        index: int,
        role: str = Role.TRAINING,
        config_of: Optional[TableConfigResolver] = None,
        seeds: Optional[SeedExpander] = None,
    ):
        assert role in (Role.TRAINING, Role.SERVING), f"Unknown role {role}"
        self.__index = index
        self.__role = role
        self.__config_of = config_of
        self.__seeds = seeds
        self.__tables: Dict[int, EmbeddingTable] = {}
        self.__touched = TouchedKeys() if role == Role.TRAINING else None
        self.__dense: Optional[DenseParams] = None
        self.__optimizer: Optional[AdamOptimizer] = None
        self.__version = 0
        self.__last_applied: Dict[int, int] = {}
        self.__lock = threading.Lock()

    def __repr__(self):
        return f"<PSShard {self.__index} {self.__role} v{self.__version}, {len(self.__tables)} tables, {self.num_keys():,} keys>"

    def get_index(self) -> int:
        return self.__index

    def get_role(self) -> str:
        return self.__role

    def is_serving(self) -> bool:
        return self.__role == Role.SERVING

    def get_version(self) -> int:
        return self.__version

    def set_version(self, version: int):
        assert version >= self.__version or self.__role == Role.TRAINING, "Serving version never decreases"
        self.__version = version

    def bump_version(self) -> int:
        with self.__lock:
            self.__version += 1
            return self.__version

    def get_touched(self) -> Optional[TouchedKeys]:
        return self.__touched

    def set_config_resolver(self, config_of: TableConfigResolver):
        self.__config_of = config_of

    def set_seeds(self, seeds: Optional[SeedExpander]):
        self.__seeds = seeds

    def get_last_applied(self, source: int) -> int:
        """Version of the last packet applied from training shard `source`, 0 if none."""
        return self.__last_applied.get(source, 0)

    def get_last_applied_map(self) -> Dict[int, int]:
        return dict(self.__last_applied)

    def set_last_applied(self, source: int, version: int):
        self.__last_applied[source] = version

    def get_table(self, table_id: int) -> Optional[EmbeddingTable]:
        return self.__tables.get(table_id)

    def get_or_create_table(self, table_id: int) -> EmbeddingTable:
        table = self.__tables.get(table_id)
        if table is None:
            assert self.__config_of is not None, f"Shard {self.__index} has no config for new table {table_id}"
            table = self.create_table(table_id, self.__config_of(table_id))
        return table

    def create_table(self, table_id: int, config: TableConfig) -> EmbeddingTable:
        with self.__lock:
            table = self.__tables.get(table_id)
            if table is not None:
                return table
            rng = None
            if self.__seeds is not None:
                rng = self.__seeds.generator(f"{self.__role}.{self.__index}.table.{table_id}")
            table = EmbeddingTable(table_id, config, rng=rng, touched=self.__touched)
            self.__tables[table_id] = table
        logger.debug("Shard %d (%s) created table %d, dim %d", self.__index, self.__role, table_id, config.dim)
        return table

    def tables(self) -> Iterator[EmbeddingTable]:
        for table_id in sorted(self.__tables):
            yield self.__tables[table_id]

    def table_ids(self) -> list[int]:
        return sorted(self.__tables)

    def num_keys(self) -> int:
        return sum(len(table) for table in self.__tables.values())

    def get_dense(self) -> Optional[DenseParams]:
        return self.__dense

    def set_dense(self, dense: Optional[DenseParams]):
        """Replace the dense block as a whole, readers see old or new."""
        self.__dense = dense

    def get_optimizer(self) -> Optional[AdamOptimizer]:
        return self.__optimizer

    def set_optimizer(self, optimizer: Optional[AdamOptimizer]):
        assert optimizer is None or self.__role == Role.TRAINING, "Serving shards never train"
        self.__optimizer = optimizer

    def evict_expired(self, now: float) -> int:
        return sum(table.evict_expired(now) for table in self.__tables.values())

    def same_state(self, other: "PSShard") -> bool:
        """Deep, bit-exact comparison of everything a snapshot persists."""
        if (self.__index, self.__role, self.__version) != (other.get_index(), other.get_role(), other.get_version()):
            return False
        if self.__last_applied != other.get_last_applied_map():
            return False
        if self.table_ids() != other.table_ids():
            return False
        for table in self.tables():
            theirs = other.get_table(table.get_table_id())
            if table.get_config() != theirs.get_config():
                return False
            mine_items = table.snapshot_items()
            their_items = theirs.snapshot_items()
            if [k for k, _ in mine_items] != [k for k, _ in their_items]:
                return False
            if not all(a.same_state(b) for (_, a), (_, b) in zip(mine_items, their_items)):
                return False
        if (self.__dense is None) != (other.get_dense() is None):
            return False
        if self.__dense is not None and not self.__dense.same_state(other.get_dense()):
            return False
        if (self.__optimizer is None) != (other.get_optimizer() is None):
            return False
        return self.__optimizer is None or self.__optimizer.same_state(other.get_optimizer())

    def lookup_vector(self, table_id: int, key_id: int) -> Optional[np.ndarray]:
        """Plain read without admission, used by serving and tests."""
        table = self.__tables.get(table_id)
        if table is None:
            return None
        entry = table.get_cuckoo().lookup(key_id)
        return None if entry is None else entry.vector
