from typing import Optional


class ConfigError(ValueError):
    """A configuration field is missing, unknown or invalid."""

    def __init__(self, section: str, key: Optional[str], message: str):
        self.section = section
        self.key = key
        self.message = message
        where = f"[{section}] {key}" if key else f"[{section}]"
        super().__init__(f"{where}: {message}")
