import numpy as np

from ...utils.mixer import Mixer64
from .occurrence_counter import OccurrenceCounter

DEFAULT_ROWS = 4
DEFAULT_WIDTH = 1 << 18


class CountMinSketch(OccurrenceCounter):

    """Count-min sketch over 64-bit ids.

    Each row hashes the id with its own seeded mixer and bumps one
    counter; the estimate is the minimum over rows, so it can only
    overshoot the true count. Counters saturate at 2**32 - 1.

    Increments from several threads are not serialised: a lost update
    makes an estimate lower than it would otherwise be, which only
    delays an admission.
    """

    def __init__(self, rows: int = DEFAULT_ROWS, width: int = DEFAULT_WIDTH, seed: int = 0):
        assert rows >= 1, f"Need at least one row, got {rows}"
        assert width > 0 and width & (width - 1) == 0, f"Width must be a power of two, got {width}"
        self.__mask = width - 1
        self.__hashes = [Mixer64(seed + 7919 * r + 1) for r in range(rows)]
        self.__counters = np.zeros((rows, width), dtype=np.uint32)
        self.__ceiling = np.iinfo(np.uint32).max

    def get_shape(self) -> tuple[int, int]:
        return self.__counters.shape

    def add(self, key: int) -> int:
        est = self.__ceiling
        for row, h in enumerate(self.__hashes):
            col = h.bucket(key, self.__mask)
            value = int(self.__counters[row, col])
            if value < self.__ceiling:
                value += 1
                self.__counters[row, col] = value
            est = min(est, value)
        return est

    def estimate(self, key: int) -> int:
        return min(int(self.__counters[row, h.bucket(key, self.__mask)]) for row, h in enumerate(self.__hashes))
