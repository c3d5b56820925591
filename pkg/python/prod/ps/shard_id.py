from dataclasses import dataclass

from ..store.feature_key import FeatureKey
from ..utils.mixer import mix64


@dataclass(frozen=True)
class ShardId:

    index: int

    num_shards: int

    def __post_init__(self):
        assert self.num_shards >= 1, f"Need at least one shard, got {self.num_shards}"
        assert 0 <= self.index < self.num_shards, f"Shard {self.index} out of range for {self.num_shards} shards"

    def __int__(self) -> int:
        return self.index


def partition(key: FeatureKey, num_shards: int) -> ShardId:
    """Shard owning `key`, a pure function of the id and the shard count.

    Ids are mixed first so sequential ids spread over shards.
    """
    assert num_shards >= 1, f"Need at least one shard, got {num_shards}"
    return ShardId(mix64(key.id) % num_shards, num_shards)
