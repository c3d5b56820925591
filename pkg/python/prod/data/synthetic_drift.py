import logging
from typing import List

import numpy as np

from ..store.feature_key import FeatureKey
from ..utils.seeding import SeedExpander
from .drift_config import DriftConfig
from .training_example import TrainingExample

logger = logging.getLogger(__name__)


class SyntheticDrift:

    """Generate a labelled stream with concept drift.

    Slot 0 draws ids 1..num_ids with Zipf popularity. The click rate of
    id `k` at step `t` is::

        base_ctr + offset_k + drift_amplitude * sin(2 pi t / drift_period + phase_k)

    with a fixed random phase per id and a fixed offset drawn uniformly
    from [-static_spread, static_spread]. Other slots draw uniform context
    ids that carry no signal. The stream is a pure function of the config.
    """

    def __init__(self, config: DriftConfig):
        self.__config = config
        self.__seeds = SeedExpander(config.seed)
        ranks = np.arange(1, config.num_ids + 1, dtype=np.float64)
        weights = ranks ** -config.zipf_exponent
        self.__popularity = weights / weights.sum()
        self.__phases = self.__seeds.generator("drift.phase").uniform(0.0, 2.0 * np.pi, size=config.num_ids)
        self.__offsets = self.__seeds.generator("drift.static").uniform(-config.static_spread, config.static_spread, size=config.num_ids)

    def get_config(self) -> DriftConfig:
        return self.__config

    def popularity(self) -> np.ndarray:
        """Draw probability of rank 1..num_ids."""
        return self.__popularity.copy()

    def probability(self, rank, step) -> np.ndarray:
        """Programmed click rate of `rank` (1-based) at `step`."""
        config = self.__config
        rank = np.asarray(rank)
        step = np.asarray(step, dtype=np.float64)
        angle = 2.0 * np.pi * step / config.drift_period + self.__phases[rank - 1]
        return config.base_ctr + self.__offsets[rank - 1] + config.drift_amplitude * np.sin(angle)

    def apply(self) -> List[TrainingExample]:
        config = self.__config
        n = config.num_examples
        ranks = self.__seeds.generator("drift.ids").choice(config.num_ids, size=n, p=self.__popularity) + 1
        steps = np.arange(n)
        labels = (self.__seeds.generator("drift.labels").random(n) < self.probability(ranks, steps)).astype(int)
        context = self.__seeds.generator("drift.context").integers(0, config.context_ids, size=(n, config.num_slots - 1))

        examples = []
        for t in range(n):
            features = (FeatureKey(0, int(ranks[t])),) + tuple(
                FeatureKey(slot, int(context[t, slot - 1])) for slot in range(1, config.num_slots)
            )
            examples.append(TrainingExample(features, int(labels[t]), float(t)))
        logger.info("Generated %d drift examples, positive rate %.4f", n, labels.mean())
        return examples
