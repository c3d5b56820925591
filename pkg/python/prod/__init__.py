from .store.feature_key import FeatureKey
from .store.embedding_entry import EmbeddingEntry
from .store.table_config import TableConfig
from .store.storage_exhausted import StorageExhausted
from .store.cuckoo_table import CuckooTable
from .store.embedding_table import EmbeddingTable, TableStats
from .store.decompose import decompose_id
from .store.counter.count_min_sketch import CountMinSketch
from .store.counter.exact_counter import ExactCounter
from .store.tools.table_codec import TableCodec, CorruptTableData
from .model.deepfm_config import DeepFMConfig
from .model.dense_params import DenseParams
from .model.prediction import Prediction
from .model.deepfm import DeepFM
from .model.metrics import auc, log_loss
from .model.adam_optimizer import AdamOptimizer
from .model.shape_mismatch import ShapeMismatch
from .model.undefined_metric import UndefinedMetric
from .model.tools.dense_codec import DenseCodec, CorruptDenseData
from .sync.touched_keys import TouchedKeys
from .sync.sync_packet import SyncPacket, PacketSection
from .sync.packet_codec import PacketCodec, CorruptPacket
from .sync.sync_schedule import SyncSchedule, should_sync
from .sync.stale_packet import StalePacket
from .sync.parameter_sync import ParameterSync, estimate_packet_bytes
from .ps.shard_id import ShardId, partition
from .ps.ps_shard import PSShard
from .ps.snapshot_manifest import SnapshotManifest
from .ps.snapshot import Snapshot
from .ps.restore import Restore
from .ps.recovery_error import RecoveryError
from .ps.snapshot_aborted import SnapshotAborted
from .ps.failure_plan import FailurePlan
from .ps.ps_cluster import PSCluster
from .ps.expected_feedback_loss import ExpectedFeedbackLoss, expected_feedback_loss
from .joiner.feature_log import FeatureLog
from .joiner.action_log import ActionLog
from .joiner.joined_example import JoinedExample
from .joiner.joiner_config import JoinerConfig
from .joiner.disk_store import DiskStore
from .joiner.example_queue import MemoryExampleQueue, FileExampleQueue
from .joiner.online_joiner import OnlineJoiner
from .joiner.negative_sampling import negative_sample, log_odds_correct
from .joiner.tools.stream_records import StreamRecords
from .joiner.tools.synthetic_traffic import SyntheticTraffic, TrafficConfig
from .data.training_example import TrainingExample
from .data.data_file_missing import DataFileMissing
from .data.raw_rating import RawRating, binarize_label
from .data.movielens_load import MovieLensLoad
from .data.criteo_load import CriteoLoad
from .data.md5_reducer import Md5Reducer
from .data.collision_stats import collision_rate, hash_collision_stats, expected_distinct, shared_row_rate
from .data.split_shards import split_shards
from .data.drift_config import DriftConfig
from .data.synthetic_drift import SyntheticDrift
from .trainer.config_error import ConfigError
from .trainer.experiment_config import ExperimentConfig
from .trainer.config_load import ConfigLoad
from .trainer.metrics_row import MetricsRow, MetricsTable
from .trainer.key_resolver import CollisionlessResolver, DecomposedResolver
from .trainer.worker import Worker
from .trainer.online_training import OnlineTraining
from .trainer.collision_experiment import CollisionExperiment
from .trainer.online_vs_batch import OnlineVsBatch
from .trainer.sync_sweep import SyncSweep
from .trainer.reliability_experiment import ReliabilityExperiment
from .trainer.sync_bench import SyncBench
from .trainer.joiner_simulation import JoinerSimulation
from .cli.main import main
from .utils.progress_update import ProgressUpdate
from .utils.base_utils import BaseUtils
from .utils.mixer import mix64
from .utils.seeding import SeedExpander
from .enums.role_enum import RoleEnum as Role
from .enums.sync_action_enum import SyncActionEnum as SyncAction
from .enums.timeout_policy_enum import TimeoutPolicyEnum as TimeoutPolicy
from .enums.action_kind_enum import ActionKindEnum as ActionKind
from .enums.data_source_enum import DataSourceEnum as DataSource
from .enums.subcommand_enum import SubcommandEnum as Subcommand
from .enums.table_offset_enum import TableOffsetEnum as TableOffset
from .enums.init_experiment_enum import InitExperimentEnum as InitExperiment
