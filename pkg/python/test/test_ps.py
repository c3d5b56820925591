import math
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from cuckoorec import (
    FailurePlan,
    RecoveryError,
    Restore,
    Snapshot,
    SnapshotAborted,
    SnapshotManifest,
    TableOffset,
    expected_feedback_loss,
    partition,
)
from cuckoorec.ps.snapshot import DENSE_FILE, SHARD_FILE, table_file
from cuckoorec.ps.snapshot_manifest import ManifestFile
from cuckoorec.store.feature_key import FeatureKey


def populate(cluster, num_keys: int = 40, now: float = 1.0):
    """Admit keys in table 0 and its linear table, then apply one update batch."""
    grads = {}
    for i in range(num_keys):
        key = FeatureKey(0, 1000 + i)
        linear = FeatureKey(TableOffset.LINEAR, 1000 + i)
        cluster.lookup_or_admit(key, now)
        cluster.lookup_or_admit(linear, now)
        grads[key] = np.full(cluster.get_model_config().dim, 0.1 * (i % 3 - 1), dtype=np.float32)
        grads[linear] = np.array([0.05], dtype=np.float32)
    dense_grads = cluster.get_dense().zeros_like()
    dense_grads.bias[0] = 0.5
    cluster.apply_update_batch(grads, lr=0.05, now=now + 1, dense_grads=dense_grads)
    return list(grads)


# partition

def test_single_shard_owns_everything():
    assert all(int(partition(FeatureKey(0, i), 1)) == 0 for i in range(100))


def test_partition_is_deterministic():
    key = FeatureKey(3, 987654321)
    assert partition(key, 7) == partition(key, 7)


def test_partition_is_balanced():
    counts = Counter(int(partition(FeatureKey(0, i), 16)) for i in range(100_000))
    expected = 100_000 / 16
    assert len(counts) == 16
    assert all(abs(c - expected) <= 0.15 * expected for c in counts.values())


# snapshot and restore

def test_snapshot_restore_is_bit_exact(make_cluster, seeds, tmp_path):
    cluster = make_cluster(1)
    populate(cluster)
    shard = cluster.training_shard(0)
    manifest = Snapshot().apply(shard, tmp_path, timestamp=10.0)

    names = {f.name for f in manifest.files}
    assert {SHARD_FILE, DENSE_FILE, table_file(0), table_file(TableOffset.LINEAR)} <= names

    restored = Restore().apply(tmp_path / "shard_0" / f"v{shard.get_version()}", seeds=seeds)
    assert restored.same_state(shard)
    assert restored.get_optimizer().same_state(shard.get_optimizer())


@pytest.mark.slow
def test_snapshot_round_trip_over_random_states(make_cluster, seeds, tmp_path):
    for case in range(1000):
        rng = np.random.default_rng(case)
        cluster = make_cluster(1)
        keys = populate(cluster, num_keys=int(rng.integers(1, 60)), now=float(rng.uniform(1.0, 100.0)))
        picked = rng.choice(len(keys), size=int(rng.integers(0, len(keys) + 1)), replace=False)
        grads = {}
        for i in picked:
            width = 1 if keys[i].table_id == TableOffset.LINEAR else cluster.get_model_config().dim
            grads[keys[i]] = rng.normal(size=width).astype(np.float32)
        cluster.apply_update_batch(grads, lr=float(rng.uniform(0.01, 0.5)), now=200.0)

        shard = cluster.training_shard(0)
        root = tmp_path / str(case)
        Snapshot(keep=1).apply(shard, root)
        restored = Restore().apply(Snapshot().latest(root, 0), seeds=seeds)
        assert restored.same_state(shard), f"case {case}"
        assert restored.get_optimizer().same_state(shard.get_optimizer()), f"case {case}"


def test_restored_lookups_match(make_cluster, seeds, tmp_path, rng):
    cluster = make_cluster(1)
    keys = populate(cluster, num_keys=200)
    shard = cluster.training_shard(0)
    Snapshot().apply(shard, tmp_path)
    restored = Restore().apply(Snapshot().latest(tmp_path, 0), seeds=seeds)

    for i in rng.integers(0, len(keys), size=1000):
        key = keys[i]
        assert restored.lookup_vector(key.table_id, key.id).tobytes() == shard.lookup_vector(key.table_id, key.id).tobytes()


def test_corrupted_table_names_the_file(make_cluster, seeds, tmp_path):
    cluster = make_cluster(1)
    populate(cluster)
    shard = cluster.training_shard(0)
    Snapshot().apply(shard, tmp_path)
    directory = Snapshot().latest(tmp_path, 0)
    path = directory / table_file(0)
    data = bytearray(path.read_bytes())
    data[len(data) // 2] ^= 0xFF
    path.write_bytes(bytes(data))

    with pytest.raises(RecoveryError) as e:
        Restore().apply(directory, seeds=seeds)
    assert e.value.file_name.endswith(table_file(0))


def test_missing_file_fails_restore(make_cluster, seeds, tmp_path):
    cluster = make_cluster(1)
    populate(cluster)
    Snapshot().apply(cluster.training_shard(0), tmp_path)
    directory = Snapshot().latest(tmp_path, 0)
    (directory / DENSE_FILE).unlink()

    with pytest.raises(RecoveryError, match="file missing"):
        Restore().apply(directory, seeds=seeds)


def test_identical_content_gives_identical_checksums(make_cluster, tmp_path):
    manifests = []
    for name in ("a", "b"):
        cluster = make_cluster(1)
        populate(cluster)
        manifests.append(Snapshot().apply(cluster.training_shard(0), tmp_path / name, timestamp=5.0))
    assert manifests[0].files == manifests[1].files
    assert manifests[0].to_text() == manifests[1].to_text()


def test_latest_picks_newest_complete_version(make_cluster, tmp_path):
    cluster = make_cluster(1)
    populate(cluster)
    shard = cluster.training_shard(0)
    Snapshot().apply(shard, tmp_path)
    first = shard.get_version()
    populate(cluster, now=5.0)
    Snapshot().apply(shard, tmp_path)
    # An unfinished newer version without a manifest is ignored
    (tmp_path / "shard_0" / f"v{shard.get_version() + 10}").mkdir()

    latest = Snapshot().latest(tmp_path, 0)
    assert latest.name == f"v{shard.get_version()}"
    assert shard.get_version() > first


def test_latest_without_snapshots(tmp_path):
    assert Snapshot().latest(tmp_path, 3) is None


def test_failed_write_keeps_previous_snapshot(make_cluster, seeds, tmp_path, monkeypatch):
    cluster = make_cluster(1)
    populate(cluster)
    shard = cluster.training_shard(0)
    Snapshot().apply(shard, tmp_path)
    previous = Snapshot().latest(tmp_path, 0)
    expected = Restore().apply(previous, seeds=seeds)

    populate(cluster, now=5.0)
    write_bytes = Path.write_bytes

    def failing_write(path, data):
        if path.name.startswith("table_"):
            raise OSError("disk full")
        return write_bytes(path, data)

    monkeypatch.setattr(Path, "write_bytes", failing_write)
    with pytest.raises(SnapshotAborted) as e:
        Snapshot().apply(shard, tmp_path)
    monkeypatch.undo()

    assert e.value.version == shard.get_version()
    assert sorted(p.name for p in (tmp_path / "shard_0").iterdir()) == [previous.name]
    assert Snapshot().latest(tmp_path, 0) == previous
    assert Restore().apply(previous, seeds=seeds).same_state(expected)


def test_snapshot_keeps_newest_versions(make_cluster, tmp_path):
    cluster = make_cluster(1)
    shard = cluster.training_shard(0)
    written = []
    for step in range(4):
        populate(cluster, now=1.0 + 5 * step)
        Snapshot(keep=2).apply(shard, tmp_path)
        written.append(f"v{shard.get_version()}")

    assert sorted(p.name for p in (tmp_path / "shard_0").iterdir()) == sorted(written[-2:])
    assert Snapshot().latest(tmp_path, 0).name == written[-1]


def test_cluster_prunes_with_configured_retention(make_cluster, tmp_path):
    cluster = make_cluster(2, snapshot_root=tmp_path, snapshot_every=1, snapshot_keep=1)
    for step in range(1, 4):
        populate(cluster, now=float(step))
        cluster.on_step(step, now=float(step))
    for index in range(2):
        assert len(Snapshot().versions(tmp_path / f"shard_{index}")) == 1


def test_restore_continues_initialisation_stream(make_cluster, seeds, tmp_path):
    cluster = make_cluster(1)
    populate(cluster)
    shard = cluster.training_shard(0)
    Snapshot().apply(shard, tmp_path)
    restored = Restore().apply(Snapshot().latest(tmp_path, 0), seeds=seeds)

    for table_id in shard.table_ids():
        live = shard.get_table(table_id).new_entry(0.0).vector
        again = restored.get_table(table_id).new_entry(0.0).vector
        assert np.array_equal(live, again)


def test_manifest_text_round_trip():
    manifest = SnapshotManifest(2, 17, 1234.5, [ManifestFile("table_0.bin", 99, 0xDEADBEEF), ManifestFile(SHARD_FILE, 10, 1)])
    parsed = SnapshotManifest.from_text(manifest.to_text())
    assert parsed == manifest


def test_manifest_missing_field():
    with pytest.raises(RecoveryError, match="version"):
        SnapshotManifest.from_text("shard = 0\ntimestamp = 1.0\n")


def test_manifest_not_found(tmp_path):
    with pytest.raises(RecoveryError, match="manifest not found"):
        SnapshotManifest.read(tmp_path)


# failures

def test_failure_without_snapshot_reinitialises(make_cluster):
    cluster = make_cluster(2)
    populate(cluster)
    lost = cluster.training_shard(1).get_version()

    shard = cluster.fail_shard(1)

    assert shard.num_keys() == 0
    assert cluster.training_shard(1) is shard
    counters = cluster.counters()
    assert counters["failures"] == 1
    assert counters["reinitialised"] == 1
    assert counters["lost_updates"] == lost


def test_failure_right_after_snapshot_loses_nothing(make_cluster, tmp_path):
    cluster = make_cluster(1, snapshot_root=tmp_path, snapshot_every=1, failure_plan=FailurePlan((0,), 1))
    populate(cluster)
    before = cluster.training_shard(0)

    cluster.on_step(1, now=3.0)

    after = cluster.training_shard(0)
    assert after is not before
    assert after.same_state(before)
    counters = cluster.counters()
    assert counters["snapshots"] == 1
    assert counters["restored"] == 1
    assert counters["lost_updates"] == 0


def test_failure_loses_updates_since_snapshot(make_cluster, tmp_path):
    cluster = make_cluster(1, snapshot_root=tmp_path)
    populate(cluster)
    cluster.snapshot_all()
    snapshot_version = cluster.training_shard(0).get_version()
    populate(cluster, now=5.0)
    live_version = cluster.training_shard(0).get_version()

    restored = cluster.fail_shard(0)

    assert restored.get_version() == snapshot_version
    assert cluster.counters()["lost_updates"] == live_version - snapshot_version


def test_inject_failure_merges_shards_at_same_step(make_cluster):
    cluster = make_cluster(4)
    cluster.inject_failure(1, 10)
    cluster.inject_failure(3, 10)
    assert cluster.get_failure_plan() == FailurePlan((1, 3), 10)
    assert cluster.get_failure_plan().is_due(10)
    assert not cluster.get_failure_plan().is_due(9)


def test_update_batch_reports_missing_keys(make_cluster):
    cluster = make_cluster(2)
    grads = {FeatureKey(0, 5): np.ones(4, dtype=np.float32)}
    assert cluster.apply_update_batch(grads, lr=0.1, now=1.0) == 1
    assert cluster.counters()["missing_gradient"] == 1


def test_update_batch_bumps_owning_shards(make_cluster):
    cluster = make_cluster(2)
    keys = populate(cluster)
    owners = {cluster.shard_of(k) for k in keys} | {0}
    for index in range(2):
        assert cluster.training_shard(index).get_version() == (1 if index in owners else 0)


def test_linear_tables_are_scalar(make_cluster):
    cluster = make_cluster(1)
    populate(cluster, num_keys=3)
    assert cluster.table_config(TableOffset.LINEAR).dim == 1
    assert not cluster.table_config(TableOffset.LINEAR).has_filters()
    assert cluster.table_dims() == {0: 4, TableOffset.LINEAR: 1}


# expected feedback loss

def test_expected_feedback_loss_example():
    loss = expected_feedback_loss(1000, 1e-4, 15_000_000, 1)
    assert loss.mean_days_between_failures == pytest.approx(10.0)
    assert loss.users_per_failure == pytest.approx(15_000)
    assert loss.failures_per_day == pytest.approx(0.1)


def test_expected_feedback_loss_without_failures():
    assert math.isinf(expected_feedback_loss(10, 0.0, 1000, 1).mean_days_between_failures)


def test_doubling_shards_halves_both():
    small = expected_feedback_loss(500, 1e-4, 15_000_000, 1)
    large = expected_feedback_loss(1000, 1e-4, 15_000_000, 1)
    assert large.mean_days_between_failures == pytest.approx(small.mean_days_between_failures / 2)
    assert large.users_per_failure == pytest.approx(small.users_per_failure / 2)
