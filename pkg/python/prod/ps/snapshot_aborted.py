class SnapshotAborted(Exception):
    """Writing a snapshot failed, the previous snapshot stays the latest."""

    def __init__(self, shard: int, version: int, cause: Exception):
        self.shard = shard
        self.version = version
        self.cause = cause
        super().__init__(f"Snapshot of shard {shard} at v{version} aborted: {cause}")
