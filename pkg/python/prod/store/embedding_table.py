import logging
import math
import threading
from dataclasses import dataclass, asdict
from typing import Iterator, Optional, Protocol, Tuple

import numpy as np

from .counter.count_min_sketch import CountMinSketch
from .counter.exact_counter import ExactCounter
from .counter.occurrence_counter import OccurrenceCounter
from .cuckoo_table import CuckooTable
from .embedding_entry import EmbeddingEntry
from .feature_key import FeatureKey
from .table_config import TableConfig

logger = logging.getLogger(__name__)

#: Adagrad denominator guard
ADAGRAD_EPSILON = 1e-8


class TouchListener(Protocol):
    """Receives every key that got a gradient, see :py:class:`cuckoorec.sync.TouchedKeys`."""

    def mark_touched(self, key: FeatureKey):
        ...


@dataclass
class TableStats:

    #: Ids inserted through the admission filters
    admitted: int = 0

    #: Lookups of absent ids that the filters turned away
    filtered: int = 0

    #: Gradients that arrived for ids no longer (or never) stored
    missing_gradient: int = 0

    #: Entries removed by expiry
    evicted: int = 0

    #: Times the cuckoo storage doubled
    growths: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


class EmbeddingTable:

    """One collisionless embedding table.

    - Storage is a :py:class:`CuckooTable` from raw id to :py:class:`EmbeddingEntry`

    - Absent ids go through occurrence and probabilistic admission
      before they get a slot, see :py:meth:`lookup_or_admit`

    - Entries idle for longer than `ttl` are dropped by :py:meth:`evict_expired`

    - Sparse Adagrad updates via :py:meth:`apply_gradient`

    Writers serialise on a per-table lock. Readers take no lock: vectors
    are swapped as whole arrays, never modified in place.
    """

    def __init__(
        self,
        table_id: int,
        config: TableConfig,
        rng: Optional[np.random.Generator] = None,
        touched: Optional[TouchListener] = None,
    ):
        self.__table_id = table_id
        self.__config = config
        self.__rng = rng if rng is not None else np.random.default_rng(table_id)
        self.__touched = touched
        self.__cuckoo = CuckooTable(
            capacity=config.initial_capacity,
            hash_seeds=config.hash_seeds,
            displacement_limit=config.displacement_limit,
            max_load_factor=config.max_load_factor,
            max_capacity=config.max_capacity,
        )
        self.__counter: Optional[OccurrenceCounter] = None
        self.__lock = threading.Lock()
        self.__stats = TableStats()
        self.__init_bound = 1.0 / math.sqrt(config.dim) if config.init_scale is None else config.init_scale

    def __len__(self) -> int:
        return len(self.__cuckoo)

    def __contains__(self, key: FeatureKey) -> bool:
        return key.id in self.__cuckoo

    def __repr__(self):
        return f"<EmbeddingTable {self.__table_id} dim {self.__config.dim}, {len(self)} keys>"

    def get_table_id(self) -> int:
        return self.__table_id

    def get_config(self) -> TableConfig:
        return self.__config

    def get_stats(self) -> TableStats:
        self.__stats.growths = self.__cuckoo.get_growths()
        return self.__stats

    def get_cuckoo(self) -> CuckooTable:
        return self.__cuckoo

    def set_touch_listener(self, touched: Optional[TouchListener]):
        self.__touched = touched

    def get_rng_state(self) -> dict:
        """State of the initialisation generator, JSON serialisable."""
        return self.__rng.bit_generator.state

    def set_rng_state(self, state: dict):
        self.__rng.bit_generator.state = state

    def get_counter(self) -> OccurrenceCounter:
        if self.__counter is None:
            if self.__config.exact_counting:
                self.__counter = ExactCounter()
            else:
                self.__counter = CountMinSketch(self.__config.sketch_rows, self.__config.sketch_width, seed=self.__config.hash_seeds[0])
        return self.__counter

    def lookup(self, key: FeatureKey) -> Optional[EmbeddingEntry]:
        return self.__cuckoo.lookup(key.id)

    def insert(self, key: FeatureKey, entry: EmbeddingEntry) -> bool:
        assert len(entry.vector) == self.__config.dim, f"Vector length {len(entry.vector)} does not match dim {self.__config.dim}"
        assert len(entry.accumulator) == self.__config.dim, f"Accumulator length {len(entry.accumulator)} does not match dim {self.__config.dim}"
        with self.__lock:
            return self.__cuckoo.insert(key.id, entry)

    def new_entry(self, now: float, occurrences: int = 0) -> EmbeddingEntry:
        """Fresh entry, uniform in [-s, s], s = `init_scale` or 1/sqrt(dim)."""
        dim = self.__config.dim
        vector = self.__rng.uniform(-self.__init_bound, self.__init_bound, size=dim).astype(np.float32)
        return EmbeddingEntry(vector, np.zeros(dim, dtype=np.float32), float(now), occurrences)

    def record_occurrence(self, key: FeatureKey) -> int:
        return self.get_counter().add(key.id)

    def lookup_or_admit(self, key: FeatureKey, now: float, rng: Optional[np.random.Generator] = None) -> Optional[np.ndarray]:
        """Read an embedding, admitting the id if the filters let it through.

        :return:
            The vector, or None when the id stays filtered; the caller then
            uses a zero vector and sends no gradient.
        """
        entry = self.__cuckoo.lookup(key.id)
        if entry is not None:
            entry.touch(now)
            return entry.vector

        config = self.__config
        occurrences = 0
        if config.has_filters():
            occurrences = self.record_occurrence(key)
            if occurrences < config.admit_threshold:
                self.__stats.filtered += 1
                return None

        if config.admit_probability < 1.0:
            draw = (rng if rng is not None else self.__rng).random()
            if draw >= config.admit_probability:
                self.__stats.filtered += 1
                return None

        entry = self.new_entry(now, occurrences)
        self.insert(key, entry)
        self.__stats.admitted += 1
        return entry.vector

    def apply_gradient(self, key: FeatureKey, grad: np.ndarray, lr: float, now: float) -> bool:
        """Adagrad step on one entry.

        ``accumulator += grad**2; vector -= lr * grad / (sqrt(accumulator) + eps)``

        :return:
            False if the id is not stored (filtered or evicted)
        """
        entry = self.__cuckoo.lookup(key.id)
        if entry is None:
            self.__stats.missing_gradient += 1
            return False

        g = np.asarray(grad, dtype=np.float32)
        assert g.shape == entry.vector.shape, f"Gradient shape {g.shape} does not match dim {self.__config.dim}"
        with self.__lock:
            accumulator = entry.accumulator + g * g
            step = np.float32(lr) * g / (np.sqrt(accumulator) + np.float32(ADAGRAD_EPSILON))
            entry.accumulator = accumulator
            entry.vector = entry.vector - step
            entry.touch(now)

        if self.__touched is not None:
            self.__touched.mark_touched(key)
        return True

    def upsert_vector(self, key: FeatureKey, vector: np.ndarray, now: float):
        """Serving-side write: replace or insert the vector, no filters."""
        vector = np.array(vector, dtype=np.float32)
        entry = self.__cuckoo.lookup(key.id)
        if entry is None:
            self.insert(key, EmbeddingEntry(vector, np.zeros(self.__config.dim, dtype=np.float32), float(now)))
            return
        with self.__lock:
            entry.vector = vector
            entry.touch(now)

    def evict_expired(self, now: float) -> int:
        """Drop every entry idle for strictly more than `ttl` seconds."""
        ttl = self.__config.ttl
        if ttl <= 0:
            return 0
        with self.__lock:
            expired = [key for key, entry in self.__cuckoo.items() if now - entry.last_update > ttl]
            for key in expired:
                self.__cuckoo.delete(key)
        self.__stats.evicted += len(expired)
        if expired:
            logger.debug("Table %d evicted %d expired keys at %s", self.__table_id, len(expired), now)
        return len(expired)

    def items(self) -> Iterator[Tuple[FeatureKey, EmbeddingEntry]]:
        for key_id, entry in self.__cuckoo.items():
            yield FeatureKey(self.__table_id, key_id), entry

    def snapshot_items(self) -> list[Tuple[int, EmbeddingEntry]]:
        """Entries sorted by id, taken under the writer lock."""
        with self.__lock:
            return sorted(self.__cuckoo.items(), key=lambda kv: kv[0])
