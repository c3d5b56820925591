import hashlib


class Md5Reducer:

    """Hashing-trick reduction of 64-bit ids into `space` buckets.

    The id's 8 little-endian bytes are MD5-hashed and the first 8 bytes
    of the digest taken modulo the space.
    """

    def __init__(self, space: int):
        assert space >= 1, f"Hash space must be positive, got {space}"
        self.__space = space

    def get_space(self) -> int:
        return self.__space

    def reduce(self, key_id: int) -> int:
        digest = hashlib.md5(key_id.to_bytes(8, "little")).digest()
        return int.from_bytes(digest[:8], "little") % self.__space

    def __call__(self, key_id: int) -> int:
        return self.reduce(key_id)
