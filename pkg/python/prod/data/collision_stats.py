import math
from dataclasses import dataclass
from collections import Counter
from typing import Callable, Hashable, Iterable


@dataclass(frozen=True)
class CollisionStats:

    #: Distinct ids before reduction
    before: int

    #: Distinct ids after reduction
    after: int

    #: (before - after) / before
    rate: float


def collision_rate(before: int, after: int) -> float:
    assert 0 <= after <= before, f"Need 0 <= after <= before, got {after} and {before}"
    return 0.0 if before == 0 else (before - after) / before


def hash_collision_stats(ids: Iterable[int], reducer: Callable[[int], int]) -> CollisionStats:
    distinct = set(ids)
    reduced = {reducer(i) for i in distinct}
    return CollisionStats(len(distinct), len(reduced), collision_rate(len(distinct), len(reduced)))


def shared_row_rate(ids: Iterable[int], rows_of: Callable[[int], Iterable[Hashable]]) -> float:
    """Fraction of distinct ids that share at least one parameter row with another id.

    :param rows_of:
        Stored rows an id's embedding is assembled from
    """
    rows = {i: set(rows_of(i)) for i in set(ids)}
    if not rows:
        return 0.0
    users = Counter(row for owned in rows.values() for row in owned)
    shared = sum(1 for owned in rows.values() if any(users[row] > 1 for row in owned))
    return shared / len(rows)


def expected_distinct(n: int, m: int) -> float:
    """Expected occupied buckets when `n` distinct ids land uniformly in `m`."""
    assert m >= 1, f"Space must be positive, got {m}"
    return m * -math.expm1(n * math.log1p(-1.0 / m)) if m > 1 else float(n > 0)


def expected_distinct_std(n: int, m: int) -> float:
    """Standard deviation of the occupied bucket count."""
    if m <= 1:
        return 0.0
    empty = (1.0 - 1.0 / m) ** n
    both_empty = (1.0 - 2.0 / m) ** n
    variance = m * (m - 1) * both_empty + m * empty - (m * empty) ** 2
    return math.sqrt(max(variance, 0.0))
