"""64-bit multiply-xor-shift mixing.

Used for cuckoo bucket selection, count-min rows, shard assignment
and ingestion-time tokenization. Everything here is plain integer
arithmetic masked to 64 bits so results are identical across platforms.
"""

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """Finalizer of splitmix64; a bijection on 64-bit integers."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


class Mixer64:

    """Seeded multiply-xor-shift hash.

    Two mixers built from different seeds behave as independent hash
    functions, which is all cuckoo hashing asks for.
    """

    def __init__(self, seed: int):
        assert 0 <= seed <= MASK64, f"Seed must fit 64 bits, got {seed}"
        self.__seed = mix64(seed)

    def get_seed(self) -> int:
        return self.__seed

    def hash(self, x: int) -> int:
        return mix64(x ^ self.__seed)

    def bucket(self, x: int, mask: int) -> int:
        """Hash `x` into ``[0, mask]``; `mask` is a power of two minus one."""
        return self.hash(x) & mask
