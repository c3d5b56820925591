import logging
from typing import Dict, List

from ..data.criteo_load import CriteoLoad
from ..data.movielens_load import MovieLensLoad
from ..data.synthetic_drift import SyntheticDrift
from ..data.training_example import TrainingExample
from ..data.user_bucket_sample import UserBucketSample
from ..enums.data_source_enum import DataSourceEnum as DataSource
from .experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)


class DatasetLoad:

    """Load the example stream an experiment config points at."""

    def __init__(self, config: ExperimentConfig):
        self.__config = config
        self.__counters: Dict[str, int] = {}

    def get_counters(self) -> Dict[str, int]:
        return dict(self.__counters)

    def apply(self) -> List[TrainingExample]:
        settings = self.__config.experiment
        match settings.source:
            case DataSource.DRIFT:
                examples = SyntheticDrift(self.__config.drift).apply()
                self.__counters = {"examples": len(examples)}
            case DataSource.CRITEO:
                load = CriteoLoad(settings.data, settings.limit or None, settings.criteo_slots)
                examples = load.apply()
                self.__counters = load.get_counters()
            case DataSource.MOVIELENS:
                sample = None
                if settings.bucket_keep < settings.bucket_count:
                    sample = UserBucketSample(settings.bucket_count, settings.bucket_keep)
                load = MovieLensLoad(settings.data, sample)
                examples = load.apply()
                if settings.limit:
                    examples = examples[:settings.limit]
                self.__counters = load.get_counters()
        return examples
