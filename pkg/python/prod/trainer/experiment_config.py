from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from ..data.drift_config import DriftConfig
from ..enums.data_source_enum import DataSourceEnum as DataSource
from ..joiner.joiner_config import JoinerConfig
from ..joiner.tools.synthetic_traffic import TrafficConfig
from ..model.deepfm_config import DeepFMConfig
from ..ps.failure_plan import FailurePlan
from ..store.table_config import TableConfig
from ..sync.sync_schedule import SyncSchedule
from .config_error import ConfigError

#: Batch to online split of Algorithm 1 style runs
DEFAULT_BATCH_FRACTION = 5.0 / 7.0


@dataclass(frozen=True)
class ExperimentSettings:
    """The ``[experiment]`` section."""

    name: str = "experiment"

    #: Single 64-bit seed every random stream is derived from
    seed: int = 0

    #: One of :py:class:`DataSourceEnum`
    source: str = DataSource.DRIFT

    #: Input file for the criteo and movielens sources
    data: str = ""

    #: Rows read from the input file, 0 for all
    limit: int = 0

    #: Feature slots taken from a Criteo row
    criteo_slots: int = 39

    #: MovieLens user-bucket subsample, keep `bucket_keep` of `bucket_count`
    bucket_count: int = 100
    bucket_keep: int = 100

    #: Share of the stream used for the batch phase
    batch_fraction: float = DEFAULT_BATCH_FRACTION

    #: Online shards N of a single online run
    online_shards: int = 10

    #: N values of the sync sweep
    sweep: Tuple[int, ...] = (10, 50, 100)

    #: Repeated runs (seeds) per configuration
    repeats: int = 5

    #: Examples evaluated after each sync in sync-bench
    eval_window: int = 1024


@dataclass(frozen=True)
class ModelSettings:
    """The ``[model]`` section, slots come from the data source."""

    dim: int = 8

    mlp_layers: Tuple[int, ...] = (64, 32, 1)


@dataclass(frozen=True)
class ClusterConfig:
    """The ``[cluster]`` section."""

    shards: int = 1

    #: Steps between snapshots of every training shard, 0 disables
    snapshot_every: int = 0

    #: Snapshot versions kept per shard, 0 keeps all
    snapshot_keep: int = 0

    #: Steps between TTL eviction passes, 0 disables
    evict_every: int = 0

    #: Training shards that fail in reliability runs
    fail_shards: Tuple[int, ...] = ()

    #: Step the failure happens at, negative for none
    fail_at: int = -1

    def failure_plan(self) -> FailurePlan:
        return FailurePlan(self.fail_shards, self.fail_at)


@dataclass(frozen=True)
class TrainConfig:
    """The ``[train]`` section."""

    batch_size: int = 256

    #: Adagrad rate of embeddings and linear terms
    sparse_lr: float = 0.05

    #: Adam rate of the dense block
    dense_lr: float = 1e-3

    epochs: int = 1

    #: Mini-batches between progress callbacks
    notify_every: int = 50


@dataclass(frozen=True)
class CollisionConfig:
    """The ``[collision]`` section."""

    #: Power-of-two modulus of the decomposed baseline
    modulus: int = 1 << 10

    #: Ids are MD5-reduced into this many buckets before decomposition, 0 skips it
    hash_space: int = 0

    #: Latest share of the data held out for testing
    test_fraction: float = 0.2


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run needs, parsed from a config file."""

    experiment: ExperimentSettings = field(default_factory=ExperimentSettings)
    model: ModelSettings = field(default_factory=ModelSettings)
    table: TableConfig = field(default_factory=lambda: TableConfig(dim=8))
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    sync: SyncSchedule = field(default_factory=lambda: SyncSchedule(1, 1))
    train: TrainConfig = field(default_factory=TrainConfig)
    drift: DriftConfig = field(default_factory=DriftConfig)
    collision: CollisionConfig = field(default_factory=CollisionConfig)
    joiner: JoinerConfig = field(default_factory=lambda: JoinerConfig(memory_window=60.0, disk_ttl=600.0))
    traffic: TrafficConfig = field(default_factory=TrafficConfig)

    def num_slots(self) -> int:
        match self.experiment.source:
            case DataSource.MOVIELENS:
                return 2
            case DataSource.CRITEO:
                return self.experiment.criteo_slots
            case DataSource.DRIFT:
                return self.drift.num_slots
        raise ConfigError("experiment", "source", f"unknown source {self.experiment.source!r}")

    def model_config(self) -> DeepFMConfig:
        return DeepFMConfig(self.num_slots(), self.model.dim, self.model.mlp_layers)

    def table_config(self) -> TableConfig:
        return self.table.with_dim(self.model.dim)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        """Same experiment under another seed, the drift stream included."""
        return replace(
            self,
            experiment=replace(self.experiment, seed=seed),
            drift=replace(self.drift, seed=seed),
        )

    def with_overrides(
        self,
        seed: Optional[int] = None,
        shards: Optional[int] = None,
        sync_interval: Optional[int] = None,
        dense_interval: Optional[int] = None,
        snapshot_every: Optional[int] = None,
        fail_shard: Optional[int] = None,
        fail_at: Optional[int] = None,
    ) -> "ExperimentConfig":
        """Apply command-line overrides, then validate."""
        config = self if seed is None else self.with_seed(seed)
        cluster = config.cluster
        if shards is not None:
            cluster = replace(cluster, shards=shards)
        if snapshot_every is not None:
            cluster = replace(cluster, snapshot_every=snapshot_every)
        if fail_shard is not None:
            cluster = replace(cluster, fail_shards=(fail_shard,))
        if fail_at is not None:
            cluster = replace(cluster, fail_at=fail_at)

        sync = config.sync
        if sync_interval is not None or dense_interval is not None:
            sparse = sync_interval if sync_interval is not None else sync.sparse_interval
            dense = dense_interval if dense_interval is not None else max(sync.dense_interval, sparse)
            try:
                sync = SyncSchedule(sparse, dense)
            except ValueError as e:
                raise ConfigError("sync", "dense_interval", str(e)) from e

        config = replace(config, cluster=cluster, sync=sync)
        config.validate()
        return config

    def validate(self):
        """Cross-section checks.

        :raise ConfigError:
            On the first inconsistent field
        """
        settings = self.experiment
        if settings.source not in (DataSource.DRIFT, DataSource.CRITEO, DataSource.MOVIELENS):
            raise ConfigError("experiment", "source", f"unknown source {settings.source!r}")
        if settings.source != DataSource.DRIFT and not settings.data:
            raise ConfigError("experiment", "data", f"source {settings.source} needs a data file")
        if not 0.0 < settings.batch_fraction < 1.0:
            raise ConfigError("experiment", "batch_fraction", "must be in (0, 1)")
        if settings.online_shards < 1 or any(n < 1 for n in settings.sweep):
            raise ConfigError("experiment", "online_shards", "shard counts must be >= 1")
        if settings.repeats < 1:
            raise ConfigError("experiment", "repeats", "must be >= 1")
        if not 0 < settings.bucket_keep <= settings.bucket_count:
            raise ConfigError("experiment", "bucket_keep", "must be in (0, bucket_count]")
        if not 1 <= settings.criteo_slots <= 39:
            raise ConfigError("experiment", "criteo_slots", "must be in [1, 39]")
        if self.cluster.shards < 1:
            raise ConfigError("cluster", "shards", "must be >= 1")
        if any(not 0 <= s < self.cluster.shards for s in self.cluster.fail_shards):
            raise ConfigError("cluster", "fail_shards", f"shard index outside [0, {self.cluster.shards})")
        if self.cluster.snapshot_every < 0:
            raise ConfigError("cluster", "snapshot_every", "must be >= 0")
        if self.cluster.snapshot_keep < 0:
            raise ConfigError("cluster", "snapshot_keep", "must be >= 0")
        if self.train.batch_size < 1 or self.train.epochs < 1:
            raise ConfigError("train", "batch_size", "batch_size and epochs must be >= 1")
        if self.train.sparse_lr <= 0 or self.train.dense_lr <= 0:
            raise ConfigError("train", "sparse_lr", "learning rates must be positive")
        modulus = self.collision.modulus
        if modulus < 1 or modulus & (modulus - 1):
            raise ConfigError("collision", "modulus", f"{modulus} is not a power of two")
        if not 0.0 < self.collision.test_fraction < 1.0:
            raise ConfigError("collision", "test_fraction", "must be in (0, 1)")
        try:
            self.model_config()
        except ValueError as e:
            raise ConfigError("model", "mlp_layers", str(e)) from e
