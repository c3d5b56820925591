
class ShapeMismatch(ValueError):
    """Model inputs do not match the configured network shape."""

    def __init__(self, what: str, expected, got):
        self.what = what
        self.expected = expected
        self.got = got

        super().__init__(f"{what}: expected {expected}, got {got}")
