import logging
import time
from typing import List, Sequence

import numpy as np

from ..utils.base_utils import BaseUtils
from .config_error import ConfigError
from .experiment import ExperimentResult
from .metrics_row import MetricsRow
from .online_training import OnlineTraining
from .online_vs_batch import OnlineVsBatch

logger = logging.getLogger(__name__)


class ReliabilityExperiment(OnlineVsBatch):

    """Paired online runs, one of which loses training shards mid-run.

    Both runs share seed, data and schedule. The failure run snapshots
    every `snapshot_every` steps and crashes the `fail_shards` after step
    `fail_at`; crashed shards come back from their latest snapshot. The
    degradation is the baseline AUC minus the failure-run AUC over the
    online shards evaluated after the crash.
    """

    def check(self):
        cluster = self.config.cluster
        if cluster.shards < 2:
            raise ConfigError("cluster", "shards", "the reliability experiment needs at least 2 shards")
        if not cluster.failure_plan().is_active():
            raise ConfigError("cluster", "fail_at", "the reliability experiment needs fail_shards and fail_at >= 0")

    @staticmethod
    def after_failure(rows: Sequence[MetricsRow], eval_steps: Sequence[int], fail_at: int) -> List[MetricsRow]:
        """Rows evaluated once the failure happened, the last row if none was."""
        late = [row for row, step in zip(rows, eval_steps) if step >= fail_at]
        return late or list(rows[-1:])

    def apply(self) -> ExperimentResult:
        self.check()
        start = time.perf_counter()
        num_shards = self.config.experiment.online_shards
        fail_at = self.config.cluster.fail_at

        rows = []
        baseline_means, failure_means, degradations = [], [], []
        counters = {}
        for run in range(self.config.experiment.repeats):
            config = self.run_config(run)
            batch, shards = self.split(self.examples(run), num_shards)

            baseline = OnlineTraining().apply(self.new_worker(config), batch, shards, config.sync, arm="baseline", run=run)

            snapshot_root = self.workdir / "snapshots" / f"run_{run}" if self.workdir is not None else None
            worker = self.new_worker(config, snapshot_root=snapshot_root, with_failures=True)
            training = OnlineTraining()
            failure = training.apply(worker, batch, shards, config.sync, arm="failure", run=run)

            late = self.after_failure(failure, training.get_eval_steps(), fail_at)
            steps = {row.step for row in late}
            baseline_auc = float(np.nanmean([row.auc for row in baseline if row.step in steps]))
            failure_auc = float(np.nanmean([row.auc for row in late]))
            baseline_means.append(baseline_auc)
            failure_means.append(failure_auc)
            degradations.append(baseline_auc - failure_auc)
            counters[f"failure/run_{run}"] = worker.get_cluster().counters()
            rows.extend(baseline)
            rows.extend(failure)
            logger.info("Run %d: baseline %.4f, failure %.4f over %d shards", run, baseline_auc, failure_auc, len(late))

        utils = BaseUtils()
        baseline_mean, baseline_std = utils.mean_and_std(baseline_means)
        failure_mean, failure_std = utils.mean_and_std(failure_means)
        summary = {
            "experiment": "reliability",
            "runs": self.config.experiment.repeats,
            "failed_shards": list(self.config.cluster.fail_shards),
            "fail_at": fail_at,
            "snapshot_every": self.config.cluster.snapshot_every,
            "baseline_auc_mean": baseline_mean,
            "baseline_auc_std": baseline_std,
            "failure_auc_mean": failure_mean,
            "failure_auc_std": failure_std,
            "degradation_mean": float(np.mean(degradations)),
            "degradation_max": float(np.max(degradations)),
            "wall_time": time.perf_counter() - start,
        }
        return ExperimentResult(rows, summary, counters)
