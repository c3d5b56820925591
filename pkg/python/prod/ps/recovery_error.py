class RecoveryError(Exception):
    """A snapshot cannot be restored."""

    def __init__(self, file_name: str, reason: str):
        self.file_name = file_name
        self.reason = reason
        super().__init__(f"Cannot restore from {file_name}: {reason}")
