from dataclasses import dataclass
from typing import Tuple

from ..store.feature_key import FeatureKey


@dataclass(frozen=True)
class JoinedExample:
    """A training example produced by the joiner."""

    features: Tuple[FeatureKey, ...]

    #: 1 for positive actions, 0 otherwise
    label: int

    ts: float

    #: Set when negatives were subsampled, predictions then need log odds correction
    sampled: bool = False

    request_key: int = 0
