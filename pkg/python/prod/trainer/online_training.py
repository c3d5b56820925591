import logging
import time
from typing import List, Sequence, Tuple

from ..data.training_example import TrainingExample
from ..enums.sync_action_enum import SyncActionEnum as SyncAction
from ..sync.parameter_sync import ParameterSync
from ..sync.sync_schedule import SyncSchedule, should_sync
from .metrics_row import MetricsRow
from .worker import Worker

logger = logging.getLogger(__name__)


class OnlineTraining:

    """Simulated online training.

    ::

        train on the batch data
        for i = 1 .. N:
            sync training parameters to serving
            evaluate serving parameters on online shard i
            train on online shard i

    The sync before shard 1 always carries sparse and dense parameters,
    it deploys the batch model. Before later shards the schedule decides,
    counting shard boundaries as steps.

    With `frozen` nothing is synced or trained after the batch phase, so
    every shard is scored by the batch model.
    """

    def __init__(self, sync: ParameterSync = None):
        self.__sync = sync if sync is not None else ParameterSync()
        self.__trace: List[Tuple[str, int]] = []
        self.__eval_steps: List[int] = []

    def get_sync(self) -> ParameterSync:
        return self.__sync

    def get_trace(self) -> List[Tuple[str, int]]:
        """("sync" | "evaluate" | "train", shard) in execution order."""
        return list(self.__trace)

    def get_eval_steps(self) -> List[int]:
        """Worker step at which each shard was evaluated."""
        return list(self.__eval_steps)

    def apply(
        self,
        worker: Worker,
        batch_data: Sequence[TrainingExample],
        online_shards: Sequence[Sequence[TrainingExample]],
        schedule: SyncSchedule,
        frozen: bool = False,
        arm: str = "online",
        run: int = 0,
    ) -> List[MetricsRow]:
        start = time.perf_counter()
        cluster = worker.get_cluster()
        worker.batch_train(batch_data)
        logger.info("%s run %d: batch phase done, %d examples", arm, run, len(batch_data))

        rows = []
        wire_bytes = 0
        for i, shard in enumerate(online_shards, start=1):
            if i == 1:
                action = SyncAction.SPARSE_AND_DENSE
            elif frozen:
                action = SyncAction.NONE
            else:
                action = should_sync(i - 1, schedule)
            if action != SyncAction.NONE:
                wire_bytes += self.__sync.sync(cluster, action, shard[0].ts)
                self.__trace.append(("sync", i))

            evaluation = worker.evaluate(shard, serving=True)
            self.__trace.append(("evaluate", i))
            self.__eval_steps.append(worker.get_step())
            rows.append(MetricsRow(
                arm, run, i, evaluation.auc, evaluation.log_loss,
                worker.get_examples_seen(), wire_bytes, time.perf_counter() - start,
            ))

            if not frozen:
                worker.batch_train(shard)
                self.__trace.append(("train", i))

        logger.info("%s run %d: %d online shards, %d sync bytes", arm, run, len(online_shards), wire_bytes)
        return rows
