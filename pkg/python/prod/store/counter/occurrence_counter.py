from abc import *


class OccurrenceCounter(ABC):
    """Pre-admission occurrence counting for one embedding table."""

    @abstractmethod
    def add(self, key: int) -> int:
        """Count one occurrence and return the new estimate."""

    @abstractmethod
    def estimate(self, key: int) -> int:
        """Estimated occurrences, never below the true count."""
