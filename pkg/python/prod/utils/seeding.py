import zlib

import numpy as np

from .mixer import MASK64


class SeedExpander:

    """Expand one 64-bit experiment seed into per-component generators.

    Component names are stable strings ("init.table.3", "drift", ...),
    so adding a component never shifts the streams of the others.

    .. code-block:: python

        seeds = SeedExpander(7)
        rng = seeds.generator("admission")
    """

    def __init__(self, seed: int):
        assert 0 <= seed <= MASK64, f"Seed must fit 64 bits, got {seed}"
        self.__seed = seed

    def get_seed(self) -> int:
        return self.__seed

    def sequence(self, component: str) -> np.random.SeedSequence:
        key = zlib.crc32(component.encode("utf-8"))
        return np.random.SeedSequence(self.__seed, spawn_key=(key,))

    def generator(self, component: str) -> np.random.Generator:
        return np.random.default_rng(self.sequence(component))

    def child(self, component: str) -> "SeedExpander":
        """A derived expander, e.g. one per repeated run."""
        state = self.sequence(component).generate_state(2, dtype=np.uint32)
        return SeedExpander((int(state[0]) << 32) | int(state[1]))
