import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..data.training_example import TrainingExample
from ..model.deepfm import DeepFM
from ..model.dense_params import DenseParams
from ..model.metrics import auc, log_loss
from ..model.undefined_metric import UndefinedMetric
from ..ps.ps_cluster import PSCluster
from ..store.feature_key import FeatureKey
from ..utils.progress_update import ProgressUpdate
from .experiment_config import TrainConfig
from .key_resolver import CollisionlessResolver, KeyResolver

logger = logging.getLogger(__name__)

@dataclass
class PassStats:
    """Outcome of one training pass."""

    examples: int = 0

    steps: int = 0

    #: Mean log loss of every mini-batch, in order
    batch_losses: List[float] = field(default_factory=list)

    #: Gradients whose key was no longer stored
    missing_gradients: int = 0


@dataclass
class Evaluation:

    auc: float

    log_loss: float

    probabilities: np.ndarray


class Worker:

    """Trains DeepFM against a :py:class:`PSCluster` one mini-batch at a time.

    Per mini-batch: look up (and admit) every stored key, run the batched
    forward and backward pass, sum each key's gradients in example order,
    then hand the batch to the cluster, which applies it in key order.
    Results do not depend on anything but the seed and the data.
    """

    def __init__(
        self,
        model: DeepFM,
        cluster: PSCluster,
        config: TrainConfig,
        resolver: Optional[KeyResolver] = None,
        rng: Optional[np.random.Generator] = None,
        notify: Optional[ProgressUpdate] = None,
        verbose: bool = False,
    ):
        self.__model = model
        self.__cluster = cluster
        self.__config = config
        self.__resolver = resolver or CollisionlessResolver()
        self.__rng = rng if rng is not None else np.random.default_rng(0)
        self.__notify = notify
        self.__verbose = verbose
        self.__step = 0
        self.__examples = 0

    def get_step(self) -> int:
        return self.__step

    def get_examples_seen(self) -> int:
        return self.__examples

    def get_cluster(self) -> PSCluster:
        return self.__cluster

    def batch_train(self, examples: Sequence[TrainingExample]) -> PassStats:
        """One pass over `examples` in order."""
        stats = PassStats()
        batch_size = self.__config.batch_size
        starts = range(0, len(examples), batch_size)
        if self.__verbose:
            starts = tqdm(starts, desc="train", unit="batch", leave=False)

        chunk_losses = []
        for start in starts:
            batch = examples[start:start + batch_size]
            loss, missing = self.train_batch(batch)
            stats.batch_losses.append(loss)
            stats.missing_gradients += missing
            stats.examples += len(batch)
            stats.steps += 1
            chunk_losses.append(loss)
            if self.__notify is not None and stats.steps % self.__config.notify_every == 0:
                self.__notify(stats.examples, len(examples), self.__step, float(np.mean(chunk_losses)), batch[-1].ts)
                chunk_losses = []

        if stats.steps:
            logger.debug("Pass over %d examples in %d steps, mean loss %.4f", stats.examples, stats.steps, np.mean(stats.batch_losses))
        return stats

    def train_batch(self, batch: Sequence[TrainingExample]) -> Tuple[float, int]:
        """Forward, backward and update on one mini-batch.

        :return:
            (mean log loss, gradients dropped for missing keys)
        """
        cluster = self.__cluster
        now = max(example.ts for example in batch)
        emb, lin, emb_parts, lin_parts = self.__gather(batch, admit=True)
        labels = np.array([example.label for example in batch], dtype=np.float64)

        dense = cluster.get_dense()
        cache = self.__model.forward_batch(emb, lin, dense)
        p = cache.probabilities
        dlogits = (p - labels) / len(batch)
        dense_grads, gemb, glin = self.__model.backward_batch(cache, dlogits, dense)

        sparse_grads: Dict[FeatureKey, np.ndarray] = {}
        for b, s, key in emb_parts:
            g = gemb[b, s]
            sparse_grads[key] = sparse_grads[key] + g if key in sparse_grads else g.copy()
        for b, s, key in lin_parts:
            g = glin[b, s:s + 1]
            sparse_grads[key] = sparse_grads[key] + g if key in sparse_grads else g.copy()

        missing = cluster.apply_update_batch(sparse_grads, self.__config.sparse_lr, now, dense_grads)
        self.__step += 1
        self.__examples += len(batch)
        cluster.on_step(self.__step, now)
        return float(log_loss(p, labels).mean()), missing

    def predict(self, examples: Sequence[TrainingExample], serving: bool = True) -> np.ndarray:
        """Probabilities without admitting anything.

        :param serving:
            Read serving parameters (what users would see) instead of
            training parameters
        """
        probabilities = []
        step = max(self.__config.batch_size, 1024)
        for start in range(0, len(examples), step):
            batch = examples[start:start + step]
            emb, lin, _, _ = self.__gather(batch, admit=False, serving=serving)
            dense = self.__cluster.get_serving_dense() if serving else self.__cluster.get_dense()
            probabilities.append(self.__model.forward_batch(emb, lin, dense).probabilities)
        return np.concatenate(probabilities) if probabilities else np.zeros(0)

    def evaluate(self, examples: Sequence[TrainingExample], serving: bool = True) -> Evaluation:
        p = self.predict(examples, serving)
        labels = np.array([example.label for example in examples])
        try:
            score = auc(p, labels)
        except UndefinedMetric as e:
            logger.warning("%s", e)
            score = float("nan")
        loss = float(log_loss(p, labels).mean()) if len(labels) else float("nan")
        return Evaluation(score, loss, p)

    def __gather(self, batch, admit: bool, serving: bool = False):
        """Stack the stored vectors of a batch.

        :return:
            (embeddings (B, S, D), linear (B, S), embedding parts, linear parts),
            parts being (example, slot, key) of every stored key read
        """
        config = self.__model.get_config()
        cluster = self.__cluster
        emb = np.zeros((len(batch), config.num_slots, config.dim))
        lin = np.zeros((len(batch), config.num_slots))
        emb_parts, lin_parts = [], []
        for b, example in enumerate(batch):
            assert len(example.features) == config.num_slots, f"Example has {len(example.features)} slots, model expects {config.num_slots}"
            for s, feature in enumerate(example.features):
                for part in self.__resolver.resolve(feature):
                    linear_key = self.__resolver.linear_key(part)
                    if admit:
                        vector = cluster.lookup_or_admit(part, example.ts, self.__rng)
                        if vector is None:
                            continue
                        weight = cluster.lookup_or_admit(linear_key, example.ts, self.__rng)
                    elif serving:
                        vector = cluster.serving_lookup(part)
                        weight = cluster.serving_lookup(linear_key)
                    else:
                        vector = cluster.training_lookup(part)
                        weight = cluster.training_lookup(linear_key)
                    if vector is not None:
                        emb[b, s] += vector
                        emb_parts.append((b, s, part))
                    if weight is not None:
                        lin[b, s] += weight[0]
                        lin_parts.append((b, s, linear_key))
        return emb, lin, emb_parts, lin_parts

    def initial_dense(self) -> DenseParams:
        return self.__cluster.get_dense().copy()
