from .config_error import ConfigError
from .experiment_config import ExperimentConfig, ExperimentSettings, ModelSettings, ClusterConfig, TrainConfig, CollisionConfig
from .config_load import ConfigLoad
from .metrics_row import MetricsRow, MetricsTable
from .key_resolver import KeyResolver, CollisionlessResolver, DecomposedResolver
from .worker import Worker, PassStats, Evaluation
from .online_training import OnlineTraining
from .dataset_load import DatasetLoad
from .experiment import Experiment, ExperimentResult
from .collision_experiment import CollisionExperiment
from .online_vs_batch import OnlineVsBatch
from .sync_sweep import SyncSweep
from .reliability_experiment import ReliabilityExperiment
from .sync_bench import SyncBench
from .joiner_simulation import JoinerSimulation
