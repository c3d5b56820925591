"""Two-array cuckoo hash map keyed by 64-bit ids.

Every stored id lives either at ``h0(id)`` in ``T0`` or at ``h1(id)`` in
``T1``. A lookup therefore reads at most two slots. Inserting into an
occupied slot evicts the occupant to its slot in the other array, and so
on, until a free slot is found or the displacement limit is hit, in which
case both arrays double and everything is rehashed.

Readers take no lock. A slot holds one ``(key, value)`` tuple, so a slot
read is atomic. Displacements are planned first and then applied from the
free end of the path backwards: a moved key is written to its new slot
before its old slot is reused. A key moving from ``T1`` to ``T0`` can
still slip between a reader's two slot reads, so every move runs under an
odd version number and a miss observed across a version change is
retried. Growth builds the new arrays aside and publishes them with a
single assignment.
"""

import logging
from typing import Any, Iterator, List, Optional, Tuple

from ..utils.mixer import Mixer64
from .storage_exhausted import StorageExhausted

logger = logging.getLogger(__name__)

DEFAULT_DISPLACEMENT_LIMIT = 64
DEFAULT_MAX_LOAD_FACTOR = 0.9


class _Layout:

    """Bucket arrays of one capacity, replaced wholesale on growth."""

    __slots__ = ("capacity", "mask", "slots")

    def __init__(self, capacity: int):
        half = capacity // 2
        self.capacity = capacity
        self.mask = half - 1
        #: ``slots[side][pos]`` is ``None`` or a ``(key, value)`` tuple
        self.slots = ([None] * half, [None] * half)


class CuckooTable:

    def __init__(
        self,
        capacity: int = 1024,
        hash_seeds: Tuple[int, int] = (0, 1),
        displacement_limit: int = DEFAULT_DISPLACEMENT_LIMIT,
        max_load_factor: float = DEFAULT_MAX_LOAD_FACTOR,
        max_capacity: int = 1 << 26,
    ):
        """
        :param capacity:
            Total slots over both arrays. Power of two.

        :param hash_seeds:
            Seeds of `h0` and `h1`.

        :param displacement_limit:
            Evictions tolerated in one insert before the table grows.

        :param max_capacity:
            Growth past this raises :py:class:`StorageExhausted`.
        """
        assert capacity >= 2 and capacity & (capacity - 1) == 0, f"Capacity must be a power of two, got {capacity}"
        assert hash_seeds[0] != hash_seeds[1], "The two hash functions need different seeds"
        self.__hashes = (Mixer64(hash_seeds[0]), Mixer64(hash_seeds[1]))
        self.__limit = displacement_limit
        self.__max_load = max_load_factor
        self.__max_capacity = max_capacity
        self.__count = 0
        self.__slot_reads = 0
        self.__growths = 0
        #: Odd while a displacement chain is being applied
        self.__version = 0
        self.__layout = _Layout(capacity)

    def __len__(self) -> int:
        return self.__count

    def __contains__(self, key: int) -> bool:
        return self.locate(key) is not None

    def __repr__(self):
        return f"<CuckooTable {self.__count:,} keys, capacity {self.__layout.capacity:,}, {self.__growths} growths>"

    def get_capacity(self) -> int:
        return self.__layout.capacity

    def get_slot_reads(self) -> int:
        """Slots read by lookups since construction."""
        return self.__slot_reads

    def get_growths(self) -> int:
        return self.__growths

    def load_factor(self) -> float:
        return self.__count / self.__layout.capacity

    def slot_of(self, key: int, side: int) -> int:
        """Candidate slot of `key` in array `side`."""
        return self.__hashes[side].bucket(key, self.__layout.mask)

    def locate(self, key: int) -> Optional[Tuple[int, int]]:
        """Which array and slot hold `key`, if any."""
        layout = self.__layout
        for side in (0, 1):
            pos = self.__hashes[side].bucket(key, layout.mask)
            slot = layout.slots[side][pos]
            if slot is not None and slot[0] == key:
                return side, pos
        return None

    def get_version(self) -> int:
        return self.__version

    def lookup(self, key: int) -> Optional[Any]:
        while True:
            version = self.__version
            layout = self.__layout
            for side in (0, 1):
                self.__slot_reads += 1
                slot = layout.slots[side][self.__hashes[side].bucket(key, layout.mask)]
                if slot is not None and slot[0] == key:
                    return slot[1]
            if version % 2 == 0 and version == self.__version:
                return None

    def insert(self, key: int, value: Any) -> bool:
        """Insert or overwrite.

        :raise StorageExhausted:
            When growth is needed past `max_capacity`.

        :return:
            True, the key is retrievable afterwards
        """
        found = self.locate(key)
        if found is not None:
            side, pos = found
            self.__layout.slots[side][pos] = (key, value)
            return True

        if self.__count + 1 > self.__max_load * self.__layout.capacity:
            self.__rehash(self.__layout.capacity * 2)

        path = self.__plan(self.__layout, key)
        if path is None:
            self.__rehash(self.__layout.capacity * 2, (key, value))
        else:
            self.__move(self.__layout, path, (key, value))

        self.__count += 1
        return True

    def delete(self, key: int) -> bool:
        found = self.locate(key)
        if found is None:
            return False
        side, pos = found
        self.__layout.slots[side][pos] = None
        self.__count -= 1
        return True

    def items(self) -> Iterator[Tuple[int, Any]]:
        layout = self.__layout
        for side in (0, 1):
            for slot in layout.slots[side]:
                if slot is not None:
                    yield slot

    def keys(self) -> Iterator[int]:
        for key, _ in self.items():
            yield key

    def __plan(self, layout: _Layout, key: int) -> Optional[List[Tuple[int, int]]]:
        """Slots of the displacement chain for `key`, ending at a free slot.

        :return:
            None when the chain exceeds the displacement limit or revisits a slot
        """
        path = []
        seen = set()
        side = 0
        for _ in range(self.__limit):
            pos = self.__hashes[side].bucket(key, layout.mask)
            if (side, pos) in seen:
                return None
            seen.add((side, pos))
            path.append((side, pos))
            occupant = layout.slots[side][pos]
            if occupant is None:
                return path
            key = occupant[0]
            side ^= 1
        return None

    def __move(self, layout: _Layout, path: List[Tuple[int, int]], entry: Tuple[int, Any]):
        # Walk back from the free slot so every moved entry is written before its old slot is reused
        self.__version += 1
        for i in range(len(path) - 1, 0, -1):
            side, pos = path[i]
            prev_side, prev_pos = path[i - 1]
            layout.slots[side][pos] = layout.slots[prev_side][prev_pos]
        side, pos = path[0]
        layout.slots[side][pos] = entry
        self.__version += 1

    def __rehash(self, capacity: int, extra: Optional[Tuple[int, Any]] = None):
        entries = list(self.items())
        if extra is not None:
            entries.append(extra)

        while True:
            if capacity > self.__max_capacity:
                raise StorageExhausted(capacity, self.__max_capacity, len(entries))
            layout = _Layout(capacity)
            self.__growths += 1
            if self.__fill(layout, entries):
                break
            logger.debug("Rehash into %d slots hit a cycle, growing again", capacity)
            capacity *= 2

        self.__layout = layout
        logger.debug("Cuckoo table grew to %d slots for %d keys", capacity, len(entries))

    def __fill(self, layout: _Layout, entries: List[Tuple[int, Any]]) -> bool:
        for entry in entries:
            path = self.__plan(layout, entry[0])
            if path is None:
                return False
            self.__move(layout, path, entry)
        return True
