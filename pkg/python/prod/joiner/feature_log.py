from dataclasses import dataclass
from typing import Tuple

from ..store.feature_key import FeatureKey


@dataclass(frozen=True)
class FeatureLog:
    """Features a serving request was scored with."""

    #: Unique per serving request, pairs the log with its action
    request_key: int

    features: Tuple[FeatureKey, ...]

    #: Event time in seconds
    ts: float
