import logging
import tempfile
import time
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import numpy as np

from ..data.training_example import TrainingExample
from ..joiner.action_log import ActionLog
from ..joiner.disk_store import DiskStore
from ..joiner.example_queue import FileExampleQueue
from ..joiner.feature_log import FeatureLog
from ..joiner.negative_sampling import log_odds_correct
from ..joiner.online_joiner import OnlineJoiner
from ..joiner.tools.stream_records import StreamRecords
from ..joiner.tools.synthetic_traffic import SyntheticTraffic
from ..model.metrics import LOG_LOSS_EPS
from ..utils.seeding import SeedExpander
from .experiment import Experiment, ExperimentResult
from .metrics_row import MetricsRow

logger = logging.getLogger(__name__)


class JoinerSimulation(Experiment):

    """Feed a feature and action stream through the online joiner into training.

    The stream is :py:class:`SyntheticTraffic` or a record file given as
    `input_path`. Joined examples go through a file-backed queue; every
    time a mini-batch worth is waiting, it is scored with the current
    training parameters and then trained on. Predictions are reported raw
    and log-odds corrected for the negative sampling rate.
    """

    def __init__(self, *args, input_path: Optional[str | Path] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.input_path = Path(input_path) if input_path is not None else None

    def records(self, seeds: SeedExpander) -> list:
        if self.input_path is not None:
            return list(StreamRecords().read(self.input_path))
        return SyntheticTraffic(self.config.traffic, seeds.generator("traffic")).generate()

    def corrected(self, probabilities: np.ndarray, rate: float) -> np.ndarray:
        """Predictions mapped back to the unsampled positive rate."""
        clipped = np.clip(probabilities, LOG_LOSS_EPS, 1.0 - LOG_LOSS_EPS)
        return np.array([log_odds_correct(float(q), rate) for q in clipped])

    def apply(self) -> ExperimentResult:
        if self.workdir is not None:
            self.workdir.mkdir(parents=True, exist_ok=True)
            return self.simulate(self.workdir)
        with tempfile.TemporaryDirectory(prefix="joiner-sim-") as scratch:
            return self.simulate(Path(scratch))

    def simulate(self, workdir: Path) -> ExperimentResult:
        start = time.perf_counter()
        config = self.run_config(0)
        seeds = SeedExpander(config.experiment.seed)
        records = self.records(seeds)
        features = [r for r in records if isinstance(r, FeatureLog)]
        num_slots = len(features[0].features) if features else config.traffic.num_slots
        model_config = replace(config.model_config(), num_slots=num_slots)

        store = DiskStore(workdir / "joiner.log")
        queue = FileExampleQueue(workdir / "examples.txt")
        joiner = OnlineJoiner(config.joiner, store, queue, seeds.generator("joiner"))
        worker = self.new_worker(config, model_config=model_config)

        batch_size = config.train.batch_size
        rows: List[MetricsRow] = []
        predictions, labels = [], []
        trained: List[TrainingExample] = []

        def consume(force: bool = False):
            if len(queue) < batch_size and not (force and len(queue)):
                return
            examples = [TrainingExample.from_joined(e) for e in queue.drain()]
            evaluation = worker.evaluate(examples, serving=False)
            predictions.append(evaluation.probabilities)
            labels.append(np.array([e.label for e in examples]))
            worker.batch_train(examples)
            trained.extend(examples)
            rows.append(MetricsRow("joiner", 0, worker.get_step(), evaluation.auc, evaluation.log_loss, worker.get_examples_seen()))

        last_ts = 0.0
        for n, record in enumerate(records, start=1):
            if isinstance(record, FeatureLog):
                joiner.ingest_feature(record)
            elif isinstance(record, ActionLog):
                joiner.ingest_action(record)
            last_ts = max(last_ts, record.ts)
            if n % batch_size == 0:
                joiner.flush_expired(joiner.get_watermark())
            consume()

        joiner.flush_expired(last_ts + config.joiner.disk_ttl + 1.0)
        consume(force=True)
        store.close()

        # Remaining epochs replay everything joined, then the final model scores it
        for _ in range(config.train.epochs - 1):
            worker.batch_train(trained)
        final = worker.evaluate(trained, serving=False).probabilities if trained else np.zeros(0)

        counters = joiner.get_counters()
        p = np.concatenate(predictions) if predictions else np.zeros(0)
        y = np.concatenate(labels) if labels else np.zeros(0)
        rate = config.joiner.negative_rate
        # second half only, the model has warmed up
        tail = p[len(p) // 2:]
        corrected = self.corrected(tail, rate)
        final_corrected = self.corrected(final, rate)
        positives = int(y.sum())
        labelled = counters.joined + counters.expired_negative

        summary = {
            "experiment": "joiner-sim",
            "records": len(records),
            "examples_trained": worker.get_examples_seen(),
            "negative_rate": rate,
            "true_positive_rate": positives / labelled if labelled else float("nan"),
            "trained_positive_rate": float(y.mean()) if len(y) else float("nan"),
            "mean_prediction": float(tail.mean()) if len(tail) else float("nan"),
            "mean_corrected_prediction": float(corrected.mean()) if len(corrected) else float("nan"),
            "corrected_sampled_rate": log_odds_correct(float(y.mean()), rate) if len(y) else float("nan"),
            "final_mean_prediction": float(final.mean()) if len(final) else float("nan"),
            "final_mean_corrected_prediction": float(final_corrected.mean()) if len(final_corrected) else float("nan"),
            "pending_at_end": joiner.pending_count(),
            "wall_time": time.perf_counter() - start,
        }
        logger.info(
            "Joined %d of %d features, %d examples trained, positive rate %.4f",
            counters.joined, counters.features, worker.get_examples_seen(), summary["true_positive_rate"],
        )
        return ExperimentResult(rows, summary, {"joiner": counters.to_dict(), "cluster": worker.get_cluster().counters()})
