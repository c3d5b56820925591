import logging
from collections import Counter
from pathlib import Path
from typing import Dict, List, Mapping, Optional

import numpy as np

from ..enums.role_enum import RoleEnum as Role
from ..enums.table_offset_enum import TableOffsetEnum as TableOffset
from ..model.adam_optimizer import AdamOptimizer
from ..model.deepfm_config import DeepFMConfig
from ..model.dense_params import DenseParams
from ..store.feature_key import FeatureKey
from ..store.table_config import TableConfig
from ..utils.seeding import SeedExpander
from .failure_plan import FailurePlan
from .ps_shard import PSShard
from .restore import Restore
from .shard_id import partition
from .snapshot import Snapshot
from .snapshot_aborted import SnapshotAborted
from .snapshot_manifest import SnapshotManifest

logger = logging.getLogger(__name__)


class PSCluster:

    """In-process cluster of paired training and serving shards.

    - Keys are assigned to shard pairs with :py:func:`partition`
    - Tables are created lazily; an embedding table `t` gets its config
      from `table_overrides` or the template, its linear table
      ``LINEAR + t`` the same config at width 1 without filters
    - The dense block and its Adam state live on shard 0
    - :py:meth:`on_step` runs the snapshot cadence, TTL eviction and any
      scheduled failure
    """

    def __init__(
        self,
        num_shards: int,
        table_template: TableConfig,
        model_config: DeepFMConfig,
        seeds: SeedExpander,
        dense_lr: float = 1e-3,
        snapshot_root: Optional[str | Path] = None,
        snapshot_every: int = 0,
        snapshot_keep: int = 0,
        failure_plan: Optional[FailurePlan] = None,
        evict_every: int = 0,
        table_overrides: Optional[Dict[int, TableConfig]] = None,
    ):
        assert num_shards >= 1, f"Need at least one shard, got {num_shards}"
        assert snapshot_every == 0 or snapshot_root is not None, "Snapshot cadence needs a snapshot root"
        self.__num_shards = num_shards
        self.__template = table_template.with_dim(model_config.dim)
        self.__model_config = model_config
        self.__seeds = seeds
        self.__dense_lr = dense_lr
        self.__snapshot_root = Path(snapshot_root) if snapshot_root is not None else None
        self.__snapshot_every = snapshot_every
        self.__snapshot_keep = snapshot_keep
        self.__failure_plan = failure_plan or FailurePlan()
        self.__evict_every = evict_every
        self.__overrides = dict(table_overrides or {})
        self.__counters = Counter()

        self.__training = [self.__new_shard(i, Role.TRAINING) for i in range(num_shards)]
        self.__serving = [self.__new_shard(i, Role.SERVING) for i in range(num_shards)]

        dense = DenseParams.init(model_config, seeds.generator("dense.init"))
        self.__training[0].set_dense(dense)
        self.__training[0].set_optimizer(AdamOptimizer(lr=dense_lr))
        self.__serving[0].set_dense(dense.copy())

    def __repr__(self):
        return f"<PSCluster {self.__num_shards} shards, {self.num_keys(Role.TRAINING):,} training keys>"

    def __new_shard(self, index: int, role: str) -> PSShard:
        return PSShard(index, role, config_of=self.table_config, seeds=self.__seeds)

    def get_num_shards(self) -> int:
        return self.__num_shards

    def get_model_config(self) -> DeepFMConfig:
        return self.__model_config

    def get_failure_plan(self) -> FailurePlan:
        return self.__failure_plan

    def get_snapshot_root(self) -> Optional[Path]:
        return self.__snapshot_root

    def training_shard(self, index: int) -> PSShard:
        return self.__training[index]

    def serving_shard(self, index: int) -> PSShard:
        return self.__serving[index]

    def training_shards(self) -> List[PSShard]:
        return list(self.__training)

    def serving_shards(self) -> List[PSShard]:
        return list(self.__serving)

    def shard_of(self, key: FeatureKey) -> int:
        return partition(key, self.__num_shards).index

    def table_config(self, table_id: int) -> TableConfig:
        if table_id in self.__overrides:
            return self.__overrides[table_id]
        if table_id >= TableOffset.LINEAR:
            return self.table_config(table_id - TableOffset.LINEAR).linear()
        return self.__template

    def table_dims(self) -> Dict[int, int]:
        """Width of every table that exists on any training shard."""
        return {tid: self.table_config(tid).dim for shard in self.__training for tid in shard.table_ids()}

    def lookup_or_admit(self, key: FeatureKey, now: float, rng: Optional[np.random.Generator] = None) -> Optional[np.ndarray]:
        shard = self.__training[self.shard_of(key)]
        return shard.get_or_create_table(key.table_id).lookup_or_admit(key, now, rng)

    def training_lookup(self, key: FeatureKey) -> Optional[np.ndarray]:
        return self.__training[self.shard_of(key)].lookup_vector(key.table_id, key.id)

    def serving_lookup(self, key: FeatureKey) -> Optional[np.ndarray]:
        return self.__serving[self.shard_of(key)].lookup_vector(key.table_id, key.id)

    def get_dense(self) -> DenseParams:
        return self.__training[0].get_dense()

    def get_serving_dense(self) -> DenseParams:
        return self.__serving[0].get_dense()

    def get_optimizer(self) -> AdamOptimizer:
        return self.__training[0].get_optimizer()

    def apply_update_batch(
        self,
        sparse_grads: Mapping[FeatureKey, np.ndarray],
        lr: float,
        now: float,
        dense_grads: Optional[DenseParams] = None,
    ) -> int:
        """Apply one mini-batch of accumulated gradients.

        Keys are applied in (table, id) order so results do not depend on
        how the gradients were collected. Each shard that received
        anything moves to its next version.

        :return:
            Gradients dropped because their key is no longer stored
        """
        missing = 0
        updated = set()
        for key in sorted(sparse_grads, key=lambda k: (k.table_id, k.id)):
            index = self.shard_of(key)
            table = self.__training[index].get_or_create_table(key.table_id)
            if table.apply_gradient(key, sparse_grads[key], lr, now):
                updated.add(index)
            else:
                missing += 1
        if dense_grads is not None:
            self.get_optimizer().step(self.get_dense(), dense_grads)
            updated.add(0)
        for index in sorted(updated):
            self.__training[index].bump_version()
        self.__counters["missing_gradient"] += missing
        return missing

    def on_step(self, step: int, now: float):
        """Per-step hook: snapshots, eviction, then scheduled failures."""
        if self.__snapshot_every and step % self.__snapshot_every == 0:
            self.snapshot_all()
        if self.__evict_every and step % self.__evict_every == 0:
            self.evict_expired(now)
        if self.__failure_plan.is_due(step):
            for index in self.__failure_plan.shards:
                self.fail_shard(index)

    def snapshot_all(self) -> List[SnapshotManifest]:
        assert self.__snapshot_root is not None, "No snapshot root configured"
        manifests = []
        for shard in self.__training:
            try:
                manifests.append(Snapshot(self.__snapshot_keep).apply(shard, self.__snapshot_root))
                self.__counters["snapshots"] += 1
            except SnapshotAborted as e:
                logger.warning("%s", e)
                self.__counters["snapshot_failures"] += 1
        return manifests

    def inject_failure(self, shard: int, at_step: int):
        """Schedule training shard `shard` to fail after step `at_step`."""
        assert 0 <= shard < self.__num_shards, f"No shard {shard}"
        shards = self.__failure_plan.shards if self.__failure_plan.at_step == at_step else ()
        self.__failure_plan = FailurePlan(tuple(sorted(set(shards) | {shard})), at_step)

    def fail_shard(self, index: int) -> PSShard:
        """Discard the live state of training shard `index` and recover it.

        The latest snapshot is restored when one exists, else the shard
        comes back empty. Updates since the snapshot are lost.
        """
        failed = self.__training[index]
        latest = Snapshot().latest(self.__snapshot_root, index) if self.__snapshot_root is not None else None
        self.__counters["failures"] += 1

        if latest is not None:
            shard = Restore().apply(latest, seeds=self.__seeds)
            shard.set_config_resolver(self.table_config)
            self.__counters["restored"] += 1
            self.__counters["lost_updates"] += failed.get_version() - shard.get_version()
            if shard.get_optimizer() is not None:
                optimizer = AdamOptimizer(lr=self.__dense_lr)
                optimizer.load_state_arrays(shard.get_optimizer().state_arrays())
                shard.set_optimizer(optimizer)
            logger.info("Training shard %d failed at v%d, restored v%d", index, failed.get_version(), shard.get_version())
        else:
            shard = self.__new_shard(index, Role.TRAINING)
            if index == 0:
                shard.set_dense(DenseParams.init(self.__model_config, self.__seeds.generator("dense.init")))
                shard.set_optimizer(AdamOptimizer(lr=self.__dense_lr))
            self.__counters["reinitialised"] += 1
            self.__counters["lost_updates"] += failed.get_version()
            logger.warning("Training shard %d failed with no snapshot, reinitialised empty", index)

        self.__training[index] = shard
        return shard

    def evict_expired(self, now: float) -> int:
        """TTL eviction on both roles, serving mirrors the training TTLs."""
        training = sum(shard.evict_expired(now) for shard in self.__training)
        serving = sum(shard.evict_expired(now) for shard in self.__serving)
        self.__counters["evicted_training"] += training
        self.__counters["evicted_serving"] += serving
        return training + serving

    def num_keys(self, role: str = Role.TRAINING) -> int:
        shards = self.__training if role == Role.TRAINING else self.__serving
        return sum(shard.num_keys() for shard in shards)

    def counters(self) -> Dict[str, int]:
        counters = {name: 0 for name in ("snapshots", "snapshot_failures", "failures", "restored", "reinitialised", "lost_updates", "missing_gradient", "evicted_training", "evicted_serving")}
        counters.update(self.__counters)
        admitted = filtered = growths = 0
        for shard in self.__training:
            for table in shard.tables():
                stats = table.get_stats()
                admitted += stats.admitted
                filtered += stats.filtered
                growths += table.get_cuckoo().get_growths()
        counters.update(admitted=admitted, filtered=filtered, growths=growths)
        counters["training_keys"] = self.num_keys(Role.TRAINING)
        counters["serving_keys"] = self.num_keys(Role.SERVING)
        return counters
