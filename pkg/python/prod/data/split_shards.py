from typing import List, Sequence, TypeVar

T = TypeVar("T")


def split_shards(examples: Sequence[T], n: int) -> List[List[T]]:
    """Cut a time-sorted stream into `n` contiguous shards.

    Sizes differ by at most one, the earlier shards take the remainder.
    """
    assert n >= 1, f"Need at least one shard, got {n}"
    assert n <= len(examples), f"Cannot split {len(examples)} examples into {n} shards"
    size, extra = divmod(len(examples), n)
    shards = []
    start = 0
    for i in range(n):
        end = start + size + (1 if i < extra else 0)
        shards.append(list(examples[start:end]))
        start = end
    return shards
