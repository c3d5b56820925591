import threading
from typing import Set

from ..store.feature_key import FeatureKey


class TouchedKeys:

    """Keys that received a gradient since the last drain.

    One instance per training shard. Draining swaps the whole set out
    under the lock, so a key marked concurrently lands either in the
    drained set or in the next one, never in neither.
    """

    def __init__(self):
        self.__keys: Set[FeatureKey] = set()
        self.__lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.__keys)

    def __contains__(self, key: FeatureKey) -> bool:
        return key in self.__keys

    def mark_touched(self, key: FeatureKey):
        with self.__lock:
            self.__keys.add(key)

    def drain(self) -> Set[FeatureKey]:
        with self.__lock:
            keys, self.__keys = self.__keys, set()
        return keys
