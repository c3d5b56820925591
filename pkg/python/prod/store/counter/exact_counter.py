from collections import defaultdict

from .occurrence_counter import OccurrenceCounter


class ExactCounter(OccurrenceCounter):
    """Exact per-id counts. Memory grows with distinct ids; meant for tests."""

    def __init__(self):
        self.__counts = defaultdict(int)

    def add(self, key: int) -> int:
        self.__counts[key] += 1
        return self.__counts[key]

    def estimate(self, key: int) -> int:
        return self.__counts.get(key, 0)

    def __len__(self):
        return len(self.__counts)
