
class StorageExhausted(Exception):
    """Cuckoo table growth would exceed its allocation limit."""

    requested_capacity: int
    max_capacity: int

    def __init__(self, requested_capacity: int, max_capacity: int, size: int):
        self.requested_capacity = requested_capacity
        self.max_capacity = max_capacity
        self.size = size

        super().__init__(f"Cannot grow cuckoo table to {requested_capacity:,} slots holding {size:,} keys. Limit is {max_capacity:,} slots")
