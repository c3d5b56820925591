class StalePacket(Exception):
    """A sync packet is not newer than the last one applied from its source."""

    def __init__(self, source: int, version: int, last_applied: int):
        self.source = source
        self.version = version
        self.last_applied = last_applied
        super().__init__(f"Packet v{version} from shard {source} is stale, v{last_applied} already applied")
