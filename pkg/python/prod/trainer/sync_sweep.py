import logging
import time

from .experiment import ExperimentResult
from .online_vs_batch import OnlineVsBatch, pooled_std

logger = logging.getLogger(__name__)


class SyncSweep(OnlineVsBatch):

    """Online training at several sync frequencies.

    The online period is cut into N shards for every N of the sweep with
    one sync per shard, so larger N means fresher serving parameters while
    the examples trained stay the same. Each N is compared with the frozen
    batch model over repeated seeds.
    """

    def apply(self) -> ExperimentResult:
        start = time.perf_counter()
        sweep = self.config.experiment.sweep
        rows = []
        per_n = []
        for num_shards in sweep:
            n_rows, n_summary = self.compare(num_shards)
            rows.extend(n_rows)
            per_n.append(n_summary)

        means = [s["online_auc_mean"] for s in per_n]
        first, last = per_n[0], per_n[-1]
        summary = {
            "experiment": "sync-sweep",
            "runs": self.config.experiment.repeats,
            "sweep": list(sweep),
            "per_num_shards": per_n,
            "online_auc_monotone": all(a <= b for a, b in zip(means, means[1:])),
            "gap_last_first": last["online_auc_mean"] - first["online_auc_mean"],
            "gap_pooled_std": pooled_std(first["online_auc_std"], last["online_auc_std"]),
            "wall_time": time.perf_counter() - start,
        }
        logger.info("Sweep %s: online AUC means %s", list(sweep), ["%.4f" % m for m in means])
        return ExperimentResult(rows, summary, {})
