class DataFileMissing(FileNotFoundError):
    """An input data file does not exist."""

    def __init__(self, path: str, what: str = "data file"):
        self.path = path
        self.what = what
        super().__init__(f"Missing {what}: {path}")
