from dataclasses import dataclass
from typing import Tuple

from ..store.feature_key import FeatureKey


@dataclass(frozen=True)
class TrainingExample:
    """One labelled example, one feature per slot."""

    features: Tuple[FeatureKey, ...]

    #: 0 or 1
    label: int

    #: Event time, examples are consumed in this order
    ts: float

    request_key: int = 0

    @staticmethod
    def from_joined(example) -> "TrainingExample":
        """From a :py:class:`JoinedExample`."""
        return TrainingExample(tuple(example.features), int(example.label), float(example.ts), example.request_key)
