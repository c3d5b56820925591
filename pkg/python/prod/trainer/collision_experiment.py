import logging
import time
from collections import defaultdict
from typing import Dict, List, Tuple

from ..data.collision_stats import hash_collision_stats, shared_row_rate
from ..data.md5_reducer import Md5Reducer
from ..data.training_example import TrainingExample
from ..store.feature_key import FeatureKey
from ..utils.base_utils import BaseUtils
from .dataset_load import DatasetLoad
from .experiment import Experiment, ExperimentResult
from .key_resolver import CollisionlessResolver, DecomposedResolver, KeyResolver
from .metrics_row import MetricsRow

logger = logging.getLogger(__name__)

COLLISIONLESS = "collisionless"
HASHED = "hashed"


class CollisionExperiment(Experiment):

    """Collisionless tables against the hashing-trick baseline.

    Both arms share seed, model, data and schedule; only the way feature
    ids map to stored keys differs. Each epoch trains one pass over the
    earlier part of the stream and scores the held-out latest part with
    the training parameters.
    """

    def arms(self) -> List[Tuple[str, KeyResolver]]:
        collision = self.config.collision
        reducer = Md5Reducer(collision.hash_space) if collision.hash_space else None
        return [
            (COLLISIONLESS, CollisionlessResolver()),
            (HASHED, DecomposedResolver(collision.modulus, reducer)),
        ]

    def split(self, examples: List[TrainingExample]) -> Tuple[List[TrainingExample], List[TrainingExample]]:
        n_test = max(1, int(len(examples) * self.config.collision.test_fraction))
        return examples[:-n_test], examples[-n_test:]

    def collision_stats(self, examples: List[TrainingExample]) -> Dict[str, dict]:
        """Per-slot collisions of the hashed arm.

        `before`, `after` and `rate` count distinct ids before and after the
        md5 reduction. `shared_row_rate` is the fraction of ids whose
        embedding shares a quotient or remainder row with another id, the
        collision the decomposition itself induces.
        """
        hash_space = self.config.collision.hash_space
        reducer = Md5Reducer(hash_space) if hash_space else (lambda key_id: key_id)
        resolver = dict(self.arms())[HASHED]
        by_slot = defaultdict(set)
        for example in examples:
            for key in example.features:
                by_slot[key.table_id].add(key.id)
        stats = {}
        for slot in sorted(by_slot):
            s = hash_collision_stats(by_slot[slot], reducer)
            shared = shared_row_rate(by_slot[slot], lambda key_id: resolver.resolve(FeatureKey(slot, key_id)))
            stats[str(slot)] = {"before": s.before, "after": s.after, "rate": s.rate, "shared_row_rate": shared}
        return stats

    def apply(self) -> ExperimentResult:
        start = time.perf_counter()
        rows = []
        finals = defaultdict(list)
        wins = []
        counters = {}
        for run in range(self.config.experiment.repeats):
            config = self.run_config(run)
            load = DatasetLoad(config)
            examples = load.apply()
            if run == 0:
                stats = self.collision_stats(examples)
            train, test = self.split(examples)
            per_arm = {}
            for arm, resolver in self.arms():
                worker = self.new_worker(config, resolver)
                curve = []
                for epoch in range(1, config.train.epochs + 1):
                    worker.batch_train(train)
                    evaluation = worker.evaluate(test, serving=False)
                    curve.append(evaluation.auc)
                    rows.append(MetricsRow(
                        arm, run, epoch, evaluation.auc, evaluation.log_loss,
                        worker.get_examples_seen(), 0, time.perf_counter() - start,
                    ))
                    logger.info("%s run %d epoch %d: AUC %.4f", arm, run, epoch, evaluation.auc)
                per_arm[arm] = curve
                finals[arm].append(curve[-1])
                counters[f"{arm}.run{run}"] = worker.get_cluster().counters()
            wins.append(all(a >= b for a, b in zip(per_arm[COLLISIONLESS], per_arm[HASHED])))
            counters[f"data.run{run}"] = load.get_counters()

        utils = BaseUtils()
        summary = {"experiment": "collision", "runs": self.config.experiment.repeats, "epochs": self.config.train.epochs}
        for arm, values in finals.items():
            mean, std = utils.mean_and_std(values)
            summary[f"{arm}_final_auc_mean"] = mean
            summary[f"{arm}_final_auc_std"] = std
        summary["final_gap"] = summary[f"{COLLISIONLESS}_final_auc_mean"] - summary[f"{HASHED}_final_auc_mean"]
        summary["collisionless_wins_every_epoch"] = all(wins)
        summary["collision_stats"] = stats
        ids = sum(s["before"] for s in stats.values())
        summary["hashed_shared_row_rate"] = sum(s["shared_row_rate"] * s["before"] for s in stats.values()) / max(ids, 1)
        summary["wall_time"] = time.perf_counter() - start
        return ExperimentResult(rows, summary, counters)
