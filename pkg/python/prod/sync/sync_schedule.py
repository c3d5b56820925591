from dataclasses import dataclass

from ..enums.sync_action_enum import SyncActionEnum as SyncAction


@dataclass(frozen=True)
class SyncSchedule:
    """How often training parameters are pushed to serving.

    Sparse parameters sync every `sparse_interval` steps, the dense block
    only every `dense_interval` steps.
    """

    #: Steps between sparse syncs
    sparse_interval: int

    #: Steps between dense syncs, a multiple of `sparse_interval`
    dense_interval: int

    def __post_init__(self):
        if self.sparse_interval < 1:
            raise ValueError(f"sparse_interval must be >= 1, got {self.sparse_interval}")
        if self.dense_interval < self.sparse_interval or self.dense_interval % self.sparse_interval != 0:
            raise ValueError(
                f"dense_interval {self.dense_interval} must be a multiple of sparse_interval {self.sparse_interval}"
            )

    def action(self, step: int) -> str:
        return should_sync(step, self)


def should_sync(step: int, schedule: SyncSchedule) -> str:
    """Which parameters sync after `step`.

    :return:
        One of :py:class:`SyncActionEnum`
    """
    assert step >= 0, f"Step must be non-negative, got {step}"
    if step % schedule.dense_interval == 0:
        return SyncAction.SPARSE_AND_DENSE
    if step % schedule.sparse_interval == 0:
        return SyncAction.SPARSE_ONLY
    return SyncAction.NONE
