from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class FailurePlan:
    """Training shards to crash, and the step at which they crash."""

    #: Shard indices that fail together
    shards: Tuple[int, ...] = ()

    #: Step after which the failure happens, negative disables the plan
    at_step: int = -1

    def is_active(self) -> bool:
        return bool(self.shards) and self.at_step >= 0

    def is_due(self, step: int) -> bool:
        return self.is_active() and step == self.at_step
