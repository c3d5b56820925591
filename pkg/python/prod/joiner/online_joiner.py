import heapq
import logging
from collections import deque
from typing import Deque, Dict, List, Optional, Set, Tuple

import numpy as np

from ..enums.action_kind_enum import ActionKindEnum
from ..enums.timeout_policy_enum import TimeoutPolicyEnum as TimeoutPolicy
from .action_log import ActionLog
from .disk_store import DiskStore
from .example_queue import ExampleQueue
from .feature_log import FeatureLog
from .joined_example import JoinedExample
from .joiner_config import JoinerConfig
from .joiner_counters import JoinerCounters
from .negative_sampling import negative_sample

logger = logging.getLogger(__name__)

#: Disk logs shorter than this are never compacted
MIN_COMPACT_RECORDS = 64


class OnlineJoiner:

    """Pairs feature logs with action logs by request key.

    - Features wait in memory for `memory_window`, then spill to the
      :py:class:`DiskStore` until `disk_ttl`, then time out
    - Actions that arrive before their features wait `action_wait`
    - Each request key joins at most once; later actions are duplicates
    - Joined examples go through negative sampling into the queue

    Windows run on event time: the watermark is the newest timestamp
    seen, never the wall clock. One thread owns the joiner.
    """

    def __init__(
        self,
        config: JoinerConfig,
        store: DiskStore,
        queue: Optional[ExampleQueue] = None,
        rng: Optional[np.random.Generator] = None,
    ):
        self.__config = config
        self.__store = store
        self.__queue = queue
        self.__rng = rng if rng is not None else np.random.default_rng(0)
        self.__kinds = ActionKindEnum()
        self.__memory: Dict[int, FeatureLog] = {}
        self.__memory_heap = []
        self.__buffered: Dict[int, ActionLog] = {}
        self.__action_heap = []
        self.__joined: Set[int] = set()
        self.__joined_order: Deque[Tuple[float, int]] = deque()
        self.__watermark = float("-inf")
        self.__counters = JoinerCounters()

    def get_config(self) -> JoinerConfig:
        return self.__config

    def get_counters(self) -> JoinerCounters:
        return self.__counters

    def get_watermark(self) -> float:
        return self.__watermark

    def get_store(self) -> DiskStore:
        return self.__store

    def memory_count(self) -> int:
        return len(self.__memory)

    def memory_entries(self) -> List[FeatureLog]:
        return list(self.__memory.values())

    def buffered_count(self) -> int:
        return len(self.__buffered)

    def joined_count(self) -> int:
        """Request keys still remembered as joined."""
        return len(self.__joined)

    def pending_count(self) -> int:
        """Features still waiting for an action, in memory or on disk."""
        return len(self.__memory) + len(self.__store)

    def ingest_feature(self, log: FeatureLog) -> Optional[JoinedExample]:
        """Store features until their action arrives.

        :return:
            The example when an early action was already waiting for them
        """
        self.__counters.features += 1
        self.__advance(log.ts)
        key = log.request_key
        if key in self.__joined:
            self.__counters.duplicate_features += 1
            return None
        if key in self.__memory or self.__store.delete(key):
            self.__counters.duplicate_features += 1

        action = self.__buffered.pop(key, None)
        if action is not None:
            self.__memory.pop(key, None)
            return self.__join(log, action, from_disk=False)

        self.__memory[key] = log
        heapq.heappush(self.__memory_heap, (log.ts, key))
        self.__spill()
        return None

    def ingest_action(self, log: ActionLog, now: Optional[float] = None) -> Optional[JoinedExample]:
        """Join an action with its features, memory first, then disk.

        :return:
            The joined example unless the action had to wait, was a
            duplicate, or the example was sampled out
        """
        self.__counters.actions += 1
        self.__advance(log.ts if now is None else now)
        key = log.request_key
        if key in self.__joined:
            self.__counters.duplicate_actions += 1
            return None

        features = self.__memory.pop(key, None)
        if features is not None:
            return self.__join(features, log, from_disk=False)
        features = self.__store.pop(key)
        if features is not None:
            return self.__join(features, log, from_disk=True)

        if key in self.__buffered:
            self.__counters.duplicate_actions += 1
            return None
        self.__buffered[key] = log
        heapq.heappush(self.__action_heap, (log.ts, key))
        self.__counters.buffered_actions += 1
        return None

    def flush_expired(self, now: float) -> List[JoinedExample]:
        """Time out features older than `disk_ttl`.

        :return:
            Label-0 examples under the `emit_negative` policy, else empty
        """
        self.__advance(now)
        emitted = []
        for key in self.__store.older_than(now - self.__config.disk_ttl):
            log = self.__store.pop(key)
            self.__remember(key)
            if self.__config.timeout_policy == TimeoutPolicy.DROP:
                self.__counters.expired_dropped += 1
                continue
            self.__counters.expired_negative += 1
            example = self.__deliver(JoinedExample(log.features, 0, now, request_key=key))
            if example is not None:
                emitted.append(example)

        store = self.__store
        if store.dead_records() >= MIN_COMPACT_RECORDS and store.dead_fraction() > self.__config.compact_threshold:
            store.compact()
            self.__counters.compactions += 1
        return emitted

    def __advance(self, ts: float):
        if ts > self.__watermark:
            self.__watermark = ts
        self.__spill()
        wait = self.__config.get_action_wait()
        heap = self.__action_heap
        while heap and self.__watermark - heap[0][0] > wait:
            ts, key = heapq.heappop(heap)
            action = self.__buffered.get(key)
            if action is not None and action.ts == ts:
                del self.__buffered[key]
                self.__counters.action_misses += 1
        self.__forget()

    def __remember(self, key: int):
        self.__joined.add(key)
        self.__joined_order.append((self.__watermark, key))

    def __forget(self):
        # Forget keys once both windows have passed
        horizon = self.__config.disk_ttl + self.__config.get_action_wait()
        order = self.__joined_order
        while order and self.__watermark - order[0][0] > horizon:
            self.__joined.discard(order.popleft()[1])

    def __spill(self):
        window = self.__config.memory_window
        heap = self.__memory_heap
        while heap and self.__watermark - heap[0][0] > window:
            ts, key = heapq.heappop(heap)
            log = self.__memory.get(key)
            if log is None or log.ts != ts:
                continue
            del self.__memory[key]
            self.__store.put(log)
            self.__counters.spilled += 1

    def __join(self, features: FeatureLog, action: ActionLog, from_disk: bool) -> Optional[JoinedExample]:
        self.__remember(features.request_key)
        self.__counters.joined += 1
        if from_disk:
            self.__counters.joined_from_disk += 1
        label = 1 if self.__kinds.is_positive(action.action) else 0
        example = JoinedExample(features.features, label, max(features.ts, action.ts), request_key=features.request_key)
        return self.__deliver(example)

    def __deliver(self, example: JoinedExample) -> Optional[JoinedExample]:
        kept = negative_sample(example, self.__config.negative_rate, self.__rng)
        if kept is None:
            self.__counters.sampled_out += 1
            return None
        if self.__queue is not None:
            self.__queue.put(kept)
        return kept
