from abc import *
from typing import Callable, List, Optional

from ..enums.table_offset_enum import TableOffsetEnum as TableOffset
from ..store.decompose import decompose_id
from ..store.feature_key import FeatureKey


class KeyResolver(ABC):

    """Maps an example feature to the stored keys whose embeddings are summed."""

    @abstractmethod
    def resolve(self, key: FeatureKey) -> List[FeatureKey]:
        pass

    def linear_key(self, part: FeatureKey) -> FeatureKey:
        """Width-1 first-order term of a stored key."""
        return FeatureKey(TableOffset.LINEAR + part.table_id, part.id)


class CollisionlessResolver(KeyResolver):

    """Every raw id owns its embedding."""

    def resolve(self, key: FeatureKey) -> List[FeatureKey]:
        return [key]


class DecomposedResolver(KeyResolver):

    """Hashing-trick baseline.

    The id is optionally reduced into a smaller space first, then split
    into quotient and remainder against `modulus`; the embedding is the
    sum of a quotient-table and a remainder-table vector.
    """

    def __init__(self, modulus: int, reducer: Optional[Callable[[int], int]] = None):
        self.__modulus = modulus
        self.__reducer = reducer

    def get_modulus(self) -> int:
        return self.__modulus

    def resolve(self, key: FeatureKey) -> List[FeatureKey]:
        key_id = self.__reducer(key.id) if self.__reducer is not None else key.id
        quotient, remainder = decompose_id(key_id, self.__modulus)
        return [
            FeatureKey(TableOffset.QUOTIENT + key.table_id, quotient),
            FeatureKey(key.table_id, remainder),
        ]
