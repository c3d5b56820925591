import logging
import math
import time
from typing import Dict, List, Tuple

import numpy as np

from ..data.split_shards import split_shards
from ..data.training_example import TrainingExample
from ..utils.base_utils import BaseUtils
from .dataset_load import DatasetLoad
from .experiment import Experiment, ExperimentResult
from .metrics_row import MetricsRow
from .online_training import OnlineTraining

logger = logging.getLogger(__name__)


def pooled_std(a: float, b: float) -> float:
    return math.sqrt((a * a + b * b) / 2.0)


class OnlineVsBatch(Experiment):

    """Online training against a batch model frozen after deployment.

    Both arms run the same batch phase on the same data; the online arm
    keeps training and syncing per shard, the frozen arm never syncs
    again. Every online shard is scored by both; the win fraction counts
    the shards after the first where the online arm scores higher.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.__data: Dict[int, List[TrainingExample]] = {}

    def examples(self, run: int) -> List[TrainingExample]:
        if run not in self.__data:
            self.__data[run] = DatasetLoad(self.run_config(run)).apply()
        return self.__data[run]

    def split(self, examples: List[TrainingExample], num_shards: int) -> Tuple[List[TrainingExample], List[List[TrainingExample]]]:
        cut = int(len(examples) * self.config.experiment.batch_fraction)
        return examples[:cut], split_shards(examples[cut:], num_shards)

    def run_pair(self, run: int, num_shards: int) -> Tuple[List[MetricsRow], List[MetricsRow], int]:
        """
        :return:
            (online rows, frozen rows, online sync bytes)
        """
        config = self.run_config(run)
        batch, shards = self.split(self.examples(run), num_shards)

        training = OnlineTraining()
        online = training.apply(self.new_worker(config), batch, shards, config.sync, arm=f"online/N={num_shards}", run=run)
        frozen = OnlineTraining().apply(self.new_worker(config), batch, shards, config.sync, frozen=True, arm=f"frozen/N={num_shards}", run=run)
        return online, frozen, training.get_sync().get_counters()["bytes"]

    def compare(self, num_shards: int) -> Tuple[List[MetricsRow], dict]:
        rows = []
        online_means, frozen_means, sync_bytes = [], [], []
        wins = total = 0
        for run in range(self.config.experiment.repeats):
            online, frozen, wire = self.run_pair(run, num_shards)
            rows.extend(online)
            rows.extend(frozen)
            online_auc = np.array([row.auc for row in online])
            frozen_auc = np.array([row.auc for row in frozen])
            online_means.append(float(np.nanmean(online_auc)))
            frozen_means.append(float(np.nanmean(frozen_auc)))
            # Shard 1 is scored by the same deployed batch model in both arms
            later_online, later_frozen = online_auc[1:], frozen_auc[1:]
            valid = ~(np.isnan(later_online) | np.isnan(later_frozen))
            wins += int((later_online[valid] > later_frozen[valid]).sum())
            total += int(valid.sum())
            sync_bytes.append(wire)
            logger.info("N=%d run %d: online %.4f, frozen %.4f", num_shards, run, online_means[-1], frozen_means[-1])

        utils = BaseUtils()
        online_mean, online_std = utils.mean_and_std(online_means)
        frozen_mean, frozen_std = utils.mean_and_std(frozen_means)
        summary = {
            "num_shards": num_shards,
            "online_auc_mean": online_mean,
            "online_auc_std": online_std,
            "frozen_auc_mean": frozen_mean,
            "frozen_auc_std": frozen_std,
            "auc_gap": online_mean - frozen_mean,
            "online_win_fraction": wins / total if total else float("nan"),
            "pooled_std": pooled_std(online_std, frozen_std),
            "sync_bytes_mean": float(np.mean(sync_bytes)),
        }
        return rows, summary

    def apply(self) -> ExperimentResult:
        start = time.perf_counter()
        rows, summary = self.compare(self.config.experiment.online_shards)
        summary["experiment"] = "online-vs-batch"
        summary["runs"] = self.config.experiment.repeats
        summary["wall_time"] = time.perf_counter() - start
        return ExperimentResult(rows, summary, {})
