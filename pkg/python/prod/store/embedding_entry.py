from dataclasses import dataclass

import numpy as np


@dataclass(slots=True)
class EmbeddingEntry:
    """Stored value of one admitted feature id.

    Vectors are replaced, never written in place, so a concurrent reader
    holding the old array sees it whole.
    """

    #: Embedding, float32 of length dim
    vector: np.ndarray

    #: Adagrad sum of squared gradients, float32 of length dim, elements >= 0
    accumulator: np.ndarray

    #: Event time of the last read or update in seconds, never decreases
    last_update: float

    #: Occurrence estimate at admission time
    occurrence_estimate: int = 0

    def touch(self, now: float):
        if now > self.last_update:
            self.last_update = now

    def same_state(self, other: "EmbeddingEntry") -> bool:
        """Bit-exact comparison of the persisted fields."""
        return (
            self.vector.tobytes() == other.vector.tobytes()
            and self.accumulator.tobytes() == other.accumulator.tobytes()
            and self.last_update == other.last_update
        )
