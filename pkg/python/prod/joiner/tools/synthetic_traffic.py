from dataclasses import dataclass
from typing import List, Union

import numpy as np

from ...enums.action_kind_enum import ActionKindEnum
from ...store.feature_key import FeatureKey
from ..action_log import ActionLog
from ..feature_log import FeatureLog


@dataclass(frozen=True)
class TrafficConfig:

    num_requests: int = 10_000

    num_slots: int = 2

    #: Distinct ids per slot
    ids_per_slot: int = 1000

    #: Share of requests answered with a positive action
    positive_rate: float = 0.1

    #: Share of requests that never get an action
    silent_rate: float = 0.0

    #: Seconds between consecutive requests
    request_gap: float = 1.0

    #: Actions arrive up to this many seconds after, or before, their features
    max_lag: float = 30.0

    #: Share of actions that overtake their features
    early_rate: float = 0.1


class SyntheticTraffic:

    """Interleaved feature and action logs with random delivery lag.

    Requests are issued every `request_gap` seconds. Each action lands
    a random lag after its features, a fraction of them before, so the
    joiner sees both orders.
    """

    def __init__(self, config: TrafficConfig, rng: np.random.Generator):
        self.__config = config
        self.__rng = rng

    def generate(self) -> List[Union[FeatureLog, ActionLog]]:
        """Records in arrival (event time) order."""
        config = self.__config
        rng = self.__rng
        kinds = ActionKindEnum()
        events = []
        for n in range(config.num_requests):
            request_key = n + 1
            ts = n * config.request_gap
            ids = rng.integers(0, config.ids_per_slot, size=config.num_slots)
            features = tuple(FeatureKey(slot, int(ids[slot])) for slot in range(config.num_slots))
            events.append((ts, 0, FeatureLog(request_key, features, ts)))

            if rng.random() < config.silent_rate:
                continue
            lag = rng.uniform(0.0, config.max_lag)
            if rng.random() < config.early_rate:
                lag = -lag
            action = kinds.CLICK if rng.random() < config.positive_rate else kinds.SKIP
            action_ts = max(0.0, ts + lag)
            events.append((action_ts, 1, ActionLog(request_key, action, action_ts)))

        events.sort(key=lambda e: (e[0], e[1]))
        return [record for _, _, record in events]
