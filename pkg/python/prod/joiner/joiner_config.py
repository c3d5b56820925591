from dataclasses import dataclass
from typing import Optional

from ..enums.timeout_policy_enum import TimeoutPolicyEnum as TimeoutPolicy


@dataclass(frozen=True)
class JoinerConfig:
    """Windows and sampling of the online joiner, all in event-time seconds."""

    #: How long features wait in memory before they spill to disk
    memory_window: float

    #: How long features wait on disk before they time out
    disk_ttl: float

    #: Fraction of negatives kept
    negative_rate: float = 1.0

    #: What happens to features whose action never came
    timeout_policy: str = TimeoutPolicy.DROP

    #: How long an action waits for late features, defaults to `memory_window`
    action_wait: Optional[float] = None

    #: Compact the disk log once this fraction of it is dead
    compact_threshold: float = 0.5

    def __post_init__(self):
        if self.memory_window < 0:
            raise ValueError(f"memory_window must be >= 0, got {self.memory_window}")
        if self.disk_ttl < self.memory_window:
            raise ValueError(f"disk_ttl {self.disk_ttl} must be >= memory_window {self.memory_window}")
        if not 0.0 < self.negative_rate <= 1.0:
            raise ValueError(f"negative_rate must be in (0, 1], got {self.negative_rate}")
        if self.timeout_policy not in (TimeoutPolicy.DROP, TimeoutPolicy.EMIT_NEGATIVE):
            raise ValueError(f"Unknown timeout_policy {self.timeout_policy}")
        if self.action_wait is not None and self.action_wait < 0:
            raise ValueError(f"action_wait must be >= 0, got {self.action_wait}")

    def get_action_wait(self) -> float:
        return self.memory_window if self.action_wait is None else self.action_wait
