from dataclasses import dataclass, asdict, replace
from typing import Optional, Tuple

import xxhash

from ..utils.base_utils import BaseUtils

DEFAULT_HASH_SEEDS = (0x5EED0, 0x5EED1)


@dataclass(frozen=True)
class TableConfig:
    """Per-table storage, admission and expiry settings."""

    #: Embedding width
    dim: int

    #: Occurrences required before an id is admitted, 0 disables the filter
    admit_threshold: int = 0

    #: Probability that an id passing the threshold is admitted
    admit_probability: float = 1.0

    #: Seconds of inactivity before an entry expires, 0 never expires
    ttl: float = 0.0

    #: Total slots across both cuckoo arrays, a power of two
    initial_capacity: int = 1024

    #: Seeds of the two cuckoo hash functions
    hash_seeds: Tuple[int, int] = DEFAULT_HASH_SEEDS

    #: Growth beyond this many slots raises StorageExhausted
    max_capacity: int = 1 << 26

    #: Displacements tolerated before the table grows
    displacement_limit: int = 64

    #: Load factor that triggers growth
    max_load_factor: float = 0.9

    #: Count-min sketch rows
    sketch_rows: int = 4

    #: Counters per count-min row, a power of two
    sketch_width: int = 1 << 18

    #: Count occurrences exactly instead of with a sketch
    exact_counting: bool = False

    #: Half-width of the uniform initialisation, None for 1/sqrt(dim)
    init_scale: Optional[float] = None

    def __post_init__(self):
        utils = BaseUtils()
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.admit_threshold < 0:
            raise ValueError(f"admit_threshold must be >= 0, got {self.admit_threshold}")
        if not 0.0 < self.admit_probability <= 1.0:
            raise ValueError(f"admit_probability must be in (0, 1], got {self.admit_probability}")
        if self.ttl < 0:
            raise ValueError(f"ttl must be >= 0, got {self.ttl}")
        if not utils.is_power_of_two(self.initial_capacity) or self.initial_capacity < 2:
            raise ValueError(f"initial_capacity must be a power of two >= 2, got {self.initial_capacity}")
        if not utils.is_power_of_two(self.sketch_width):
            raise ValueError(f"sketch_width must be a power of two, got {self.sketch_width}")
        if self.init_scale is not None and self.init_scale < 0:
            raise ValueError(f"init_scale must be >= 0, got {self.init_scale}")
        if self.max_capacity < self.initial_capacity:
            raise ValueError("max_capacity must be >= initial_capacity")
        if not 0.0 < self.max_load_factor <= 1.0:
            raise ValueError(f"max_load_factor must be in (0, 1], got {self.max_load_factor}")

    def has_filters(self) -> bool:
        return self.admit_threshold > 0 or self.admit_probability < 1.0

    def digest(self) -> int:
        """64-bit digest of every field, written into table snapshot headers."""
        return xxhash.xxh64_intdigest(repr(sorted(asdict(self).items())))

    def with_dim(self, dim: int) -> "TableConfig":
        return replace(self, dim=dim)

    def linear(self) -> "TableConfig":
        """Config of the width-1, zero-initialised first-order table next to this one.

        Linear terms are only looked up for admitted ids, so they skip the filters.
        """
        return replace(self, dim=1, admit_threshold=0, admit_probability=1.0, init_scale=0.0)

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload["hash_seeds"] = list(self.hash_seeds)
        return payload

    @staticmethod
    def from_dict(payload: dict) -> "TableConfig":
        payload = dict(payload)
        payload["hash_seeds"] = tuple(payload["hash_seeds"])
        return TableConfig(**payload)
