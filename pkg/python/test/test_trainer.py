from dataclasses import replace

import numpy as np
import pytest

from cuckoorec import (
    CollisionExperiment,
    ConfigError,
    ConfigLoad,
    DataFileMissing,
    DeepFM,
    InitExperiment,
    JoinerSimulation,
    MetricsRow,
    MetricsTable,
    OnlineTraining,
    OnlineVsBatch,
    ReliabilityExperiment,
    Subcommand,
    SyncBench,
    SyncSchedule,
    SyncSweep,
    Worker,
    split_shards,
)
from cuckoorec.trainer.experiment_config import TrainConfig
from cuckoorec.trainer.metrics_row import VOLATILE_COLUMNS
from cuckoorec.trainer.online_vs_batch import pooled_std
from cuckoorec.utils.base_utils import BaseUtils

from conftest import separable_examples

SMALL = """
[experiment]
seed = 3
online_shards = 4
sweep = 2, 4
repeats = 2
eval_window = 100

[model]
dim = 4
mlp_layers = 8, 1

[table]
initial_capacity = 64

[cluster]
shards = 2

[train]
batch_size = 32

[drift]
num_ids = 50
num_examples = 700
drift_period = 400
context_ids = 10
"""


def make_worker(make_cluster, model_config, **train) -> Worker:
    train.setdefault("batch_size", 32)
    train.setdefault("sparse_lr", 0.2)
    train.setdefault("dense_lr", 0.01)
    return Worker(DeepFM(model_config), make_cluster(2), TrainConfig(**train))


def without_wall_time(rows):
    return MetricsTable(rows).to_dataframe().drop(columns=list(VOLATILE_COLUMNS))


# config

def test_defaults_from_empty_text():
    config = ConfigLoad().from_text("")
    assert config.train.batch_size == 256
    assert config.experiment.repeats == 5
    assert config.sync == SyncSchedule(1, 1)


def test_small_config_sections():
    config = ConfigLoad().from_text(SMALL)
    assert config.experiment.sweep == (2, 4)
    assert config.model.mlp_layers == (8, 1)
    assert config.drift.seed == 3
    assert config.table_config().dim == 4
    assert config.model_config().num_slots == 2


@pytest.mark.parametrize(
    "text, section, key",
    [
        ("[nonsense]\na = 1\n", "nonsense", None),
        ("[train]\nbatch = 3\n", "train", "batch"),
        ("[train]\nbatch_size = many\n", "train", "batch_size"),
        ("[table]\ndim = 8\n", "table", "dim"),
        ("[cluster]\nshards = 2\nfail_shards = 5\n", "cluster", "fail_shards"),
        ("[collision]\nmodulus = 12\n", "collision", "modulus"),
        ("[experiment]\nsource = criteo\n", "experiment", "data"),
        ("[sync]\nsparse_interval = 10\ndense_interval = 25\n", "sync", None),
    ],
)
def test_config_errors_name_the_field(text, section, key):
    with pytest.raises(ConfigError) as e:
        ConfigLoad().from_text(text)
    assert e.value.section == section
    assert e.value.key == key


def test_missing_config_file(tmp_path):
    with pytest.raises(DataFileMissing):
        ConfigLoad().apply(tmp_path / "absent.cfg")


def test_data_path_resolves_next_to_config(fixtures):
    config = ConfigLoad().apply(fixtures / "criteo_small.cfg")
    assert config.experiment.data == str((fixtures / "criteo_small.tsv").resolve())


def test_overrides():
    config = ConfigLoad().from_text(SMALL).with_overrides(seed=11, shards=4, sync_interval=5, fail_shard=3, fail_at=7)
    assert config.experiment.seed == 11
    assert config.drift.seed == 11
    assert config.cluster.shards == 4
    assert config.sync == SyncSchedule(5, 5)
    assert config.cluster.failure_plan().is_due(7)


def test_bad_overrides():
    config = ConfigLoad().from_text(SMALL)
    with pytest.raises(ConfigError):
        config.with_overrides(sync_interval=2, dense_interval=3)
    with pytest.raises(ConfigError):
        config.with_overrides(fail_shard=2)
    with pytest.raises(ConfigError):
        config.with_overrides(shards=0)


# batch training

def test_empty_pass_changes_nothing(make_cluster, model_config):
    worker = make_worker(make_cluster, model_config)
    before = worker.initial_dense()
    stats = worker.batch_train([])
    assert stats.steps == 0
    assert worker.get_cluster().num_keys() == 0
    assert worker.get_cluster().get_dense().same_state(before)


def test_learns_separable_data(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config)
    train = separable_examples(2000, rng)
    test = separable_examples(500, rng)

    first = worker.batch_train(train)
    for _ in range(2):
        worker.batch_train(train)

    assert worker.evaluate(test, serving=False).auc > 0.95
    quarter = len(first.batch_losses) // 4
    assert np.mean(first.batch_losses[:quarter]) > np.mean(first.batch_losses[-quarter:])


def test_progress_callback(make_cluster, model_config, rng):
    calls = []
    worker = Worker(
        DeepFM(model_config), make_cluster(1), TrainConfig(batch_size=10, notify_every=5),
        notify=lambda *args: calls.append(args),
    )
    worker.batch_train(separable_examples(200, rng))
    assert len(calls) == 4
    assert calls[-1][0] == 200


def test_predict_does_not_admit(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config)
    worker.predict(separable_examples(50, rng), serving=False)
    assert worker.get_cluster().num_keys() == 0


# online training

def test_online_order(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config)
    examples = separable_examples(400, rng)
    training = OnlineTraining()
    rows = training.apply(worker, examples[:200], split_shards(examples[200:], 3), SyncSchedule(1, 1))

    expected = []
    for i in (1, 2, 3):
        expected += [("sync", i), ("evaluate", i), ("train", i)]
    assert training.get_trace() == expected
    assert [row.step for row in rows] == [1, 2, 3]
    assert [row.examples for row in rows] == [200, 267, 334]


def test_evaluation_never_sees_its_own_shard(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config, batch_size=10)
    examples = separable_examples(300, rng)
    shards = split_shards(examples[100:], 4)
    training = OnlineTraining()
    training.apply(worker, examples[:100], shards, SyncSchedule(1, 1))
    assert training.get_eval_steps() == [10, 15, 20, 25]


def test_schedule_skips_syncs(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config)
    examples = separable_examples(400, rng)
    training = OnlineTraining()
    training.apply(worker, examples[:200], split_shards(examples[200:], 4), SyncSchedule(2, 2))
    syncs = [i for event, i in training.get_trace() if event == "sync"]
    assert syncs == [1, 3]


def test_single_shard_scores_batch_model(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config)
    examples = separable_examples(300, rng)
    rows = OnlineTraining().apply(worker, examples[:200], [examples[200:]], SyncSchedule(1, 1))
    assert len(rows) == 1
    assert rows[0].examples == 200


def test_frozen_arm_never_trains_online(make_cluster, model_config, rng):
    worker = make_worker(make_cluster, model_config)
    examples = separable_examples(400, rng)
    training = OnlineTraining()
    training.apply(worker, examples[:200], split_shards(examples[200:], 4), SyncSchedule(1, 1), frozen=True)
    assert [event for event, _ in training.get_trace()] == ["sync"] + ["evaluate"] * 4
    assert worker.get_examples_seen() == 200


def test_total_examples_do_not_depend_on_shard_count(make_cluster, model_config, rng):
    examples = separable_examples(400, rng)
    seen = []
    for n in (2, 5, 10):
        worker = make_worker(make_cluster, model_config)
        OnlineTraining().apply(worker, examples[:200], split_shards(examples[200:], n), SyncSchedule(1, 1))
        seen.append(worker.get_examples_seen())
    assert seen == [400, 400, 400]


def test_online_training_is_deterministic(make_cluster, model_config, rng):
    examples = separable_examples(400, rng)
    runs = []
    for _ in range(2):
        worker = make_worker(make_cluster, model_config)
        runs.append(OnlineTraining().apply(worker, examples[:200], split_shards(examples[200:], 4), SyncSchedule(1, 1)))
    assert without_wall_time(runs[0]).equals(without_wall_time(runs[1]))


# experiments

def test_dispatch():
    config = ConfigLoad().from_text(SMALL)
    assert isinstance(InitExperiment().apply(config, Subcommand.ONLINE_EXP), SyncSweep)
    assert isinstance(InitExperiment().apply(config, Subcommand.SYNC_BENCH), SyncBench)
    assert isinstance(InitExperiment().apply(config, Subcommand.JOINER_SIM), JoinerSimulation)
    with pytest.raises(ValueError):
        InitExperiment().apply(config, Subcommand.COLLISION_STATS)


def test_sweep_is_deterministic():
    config = ConfigLoad().from_text(SMALL)
    first = SyncSweep(config).apply()
    second = SyncSweep(config).apply()
    assert without_wall_time(first.rows).equals(without_wall_time(second.rows))
    assert first.summary["sweep"] == [2, 4]
    arms = {row.arm for row in first.rows}
    assert arms == {"online/N=2", "frozen/N=2", "online/N=4", "frozen/N=4"}


def test_pooled_std():
    assert pooled_std(3.0, 4.0) == pytest.approx(np.sqrt(12.5))
    assert pooled_std(0.0, 0.0) == 0.0


def test_mean_and_std_is_sample_std():
    assert BaseUtils().mean_and_std([1.0, 2.0, 3.0]) == pytest.approx((2.0, 1.0))
    assert BaseUtils().mean_and_std([0.7]) == (0.7, 0.0)


def test_reliability_needs_failure_plan():
    config = ConfigLoad().from_text(SMALL)
    with pytest.raises(ConfigError):
        ReliabilityExperiment(config).apply()
    with pytest.raises(ConfigError):
        ReliabilityExperiment(config.with_overrides(shards=1)).apply()


def test_rows_after_failure():
    rows = [MetricsRow("failure", 0, i, 0.5, 0.7, 0) for i in (1, 2, 3)]
    assert [r.step for r in ReliabilityExperiment.after_failure(rows, [10, 20, 30], 15)] == [2, 3]
    assert [r.step for r in ReliabilityExperiment.after_failure(rows, [10, 20, 30], 100)] == [3]


@pytest.mark.slow
def test_reliability_on_drift(fixtures, tmp_path):
    config = ConfigLoad().apply(fixtures / "drift_small.cfg")
    result = ReliabilityExperiment(config, tmp_path).apply()
    counters = result.counters["failure/run_0"]
    assert counters["failures"] == 1
    assert counters["restored"] == 1
    assert abs(result.summary["degradation_mean"]) < 0.01
    assert (tmp_path / "snapshots" / "run_0" / "shard_3").is_dir()


@pytest.mark.slow
def test_collision_experiment(fixtures):
    config = ConfigLoad().apply(fixtures / "movielens_small.cfg")
    result = CollisionExperiment(config).apply()
    assert len(result.rows) == 2 * 3 * 3
    assert result.summary["collisionless_wins_every_epoch"]
    assert result.summary["final_gap"] > 0.002
    assert {"collisionless_final_auc_mean", "hashed_final_auc_mean", "final_gap"} <= result.summary.keys()
    assert result.summary["collision_stats"]["0"]["before"] > 0
    for slot in ("0", "1"):
        assert result.summary["collision_stats"][slot]["shared_row_rate"] >= 0.05
    assert result.summary["hashed_shared_row_rate"] >= 0.05


@pytest.mark.slow
def test_sync_bench(fixtures):
    config = ConfigLoad().apply(fixtures / "drift_small.cfg")
    result = SyncBench(config).apply()
    summary = result.summary
    assert summary["full_scale_estimate_bytes"] == 409_600_000
    assert summary["syncs"] > 0
    assert summary["mean_sparse_sync_bytes"] > 0
    assert summary["mean_dense_sync_bytes"] > 0
    assert result.counters["sync"]["bytes"] == summary["total_bytes"]


@pytest.mark.slow
def test_joiner_simulation(fixtures, tmp_path):
    config = ConfigLoad().apply(fixtures / "joiner.cfg")
    result = JoinerSimulation(config, tmp_path).apply()
    summary = result.summary
    assert summary["examples_trained"] > 0
    assert summary["trained_positive_rate"] > summary["true_positive_rate"]
    assert summary["mean_corrected_prediction"] < summary["mean_prediction"]
    true_rate = summary["true_positive_rate"]
    assert abs(summary["corrected_sampled_rate"] - true_rate) < 1e-2
    assert abs(summary["final_mean_prediction"] - summary["trained_positive_rate"]) < 2e-2
    assert abs(summary["final_mean_corrected_prediction"] - true_rate) < 1e-2
    assert result.counters["joiner"]["joined"] > 0
    assert (tmp_path / "examples.txt").exists()


@pytest.mark.slow
def test_online_beats_frozen_under_drift(fixtures):
    config = ConfigLoad().apply(fixtures / "drift_small.cfg")
    summary = OnlineVsBatch(config).apply().summary
    assert summary["online_win_fraction"] >= 0.8
    assert summary["auc_gap"] > 0
    assert summary["online_auc_mean"] > 0.5


@pytest.mark.slow
def test_online_matches_frozen_without_drift(fixtures):
    config = ConfigLoad().apply(fixtures / "drift_small.cfg")
    config = replace(config, drift=replace(config.drift, drift_amplitude=0.0))
    summary = OnlineVsBatch(config).apply().summary
    assert summary["online_auc_mean"] > 0.5
    assert summary["frozen_auc_mean"] > 0.5
    assert abs(summary["auc_gap"]) <= max(summary["pooled_std"], 0.01)


@pytest.mark.slow
def test_sync_sweep_on_drift(fixtures):
    config = ConfigLoad().apply(fixtures / "drift_sweep.cfg")
    summary = SyncSweep(config).apply().summary
    assert summary["sweep"] == [10, 50, 100]
    assert summary["online_auc_monotone"]
    assert summary["gap_last_first"] > summary["gap_pooled_std"]
    assert all(s["online_auc_mean"] > 0.5 for s in summary["per_num_shards"])
