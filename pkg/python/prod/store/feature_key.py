from dataclasses import dataclass

from ..utils.mixer import MASK64


@dataclass(frozen=True, slots=True)
class FeatureKey:
    """A sparse feature id and the embedding table it belongs to.

    The id is stored verbatim, it is never reduced modulo a table size.
    """

    #: Owning table, one per feature slot
    table_id: int

    #: Raw 64-bit feature id
    id: int

    def __post_init__(self):
        assert 0 <= self.id <= MASK64, f"Feature id must fit 64 bits, got {self.id}"
        assert self.table_id >= 0, f"Table id must be non-negative, got {self.table_id}"

    def __repr__(self):
        return f"<{self.table_id}:{self.id}>"
