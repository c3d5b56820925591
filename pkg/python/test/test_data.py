import math
from collections import Counter

import numpy as np
import pytest

from cuckoorec import (
    CriteoLoad,
    DataFileMissing,
    DriftConfig,
    Md5Reducer,
    MovieLensLoad,
    RawRating,
    SyntheticDrift,
    binarize_label,
    collision_rate,
    expected_distinct,
    hash_collision_stats,
    shared_row_rate,
    split_shards,
)
from cuckoorec.data.collision_stats import expected_distinct_std
from cuckoorec.data.criteo_load import MISSING_TOKEN, integer_token
from cuckoorec.data.raw_rating import RatingOutOfScale
from cuckoorec.data.user_bucket_sample import UserBucketSample


def read_ids(path) -> list:
    return [int(line) for line in path.read_text().split()]


# labels

@pytest.mark.parametrize("rating, label", [(3.5, 1), (3.4999, 0), (5.0, 1), (0.5, 0)])
def test_binarize_label(rating, label):
    assert binarize_label(rating) == label


@pytest.mark.parametrize("rating", [0.0, 5.5, -1.0])
def test_out_of_scale_rating(rating):
    with pytest.raises(RatingOutOfScale):
        binarize_label(rating)
    with pytest.raises(RatingOutOfScale):
        RawRating(1, 1, rating, 0.0)


# movielens

def test_three_row_file(tmp_path):
    path = tmp_path / "ratings.csv"
    path.write_text("userId,movieId,rating,timestamp\n1,10,4.0,300\n2,20,3.0,100\n1,30,3.5,200\n")
    load = MovieLensLoad(path)
    examples = load.apply()

    assert [e.ts for e in examples] == [100.0, 200.0, 300.0]
    assert [e.label for e in examples] == [0, 1, 1]
    assert [(k.table_id, k.id) for k in examples[0].features] == [(0, 2), (1, 20)]
    assert load.get_counters()["examples"] == 3


def test_ratings_are_validated_rows(tmp_path):
    path = tmp_path / "ratings.csv"
    path.write_text("userId,movieId,rating,timestamp\n1,10,4.0,300\n2,20,3.0,100\n")
    ratings = MovieLensLoad(path).ratings()
    assert ratings == [RawRating(2, 20, 3.0, 100.0), RawRating(1, 10, 4.0, 300.0)]
    assert [r.get_label() for r in ratings] == [0, 1]


def test_bad_rows_are_counted(tmp_path):
    path = tmp_path / "ratings.csv"
    path.write_text("userId,movieId,rating,timestamp\n1,10,4.0,300\nx,20,3.0,100\n1,30,9.0,200\n3,4,,5\n")
    load = MovieLensLoad(path)
    assert len(load.apply()) == 1
    counters = load.get_counters()
    assert counters["skipped"] == 2
    assert counters["rejected"] == 1


def test_movielens_fixture_is_chronological(fixtures):
    load = MovieLensLoad(fixtures / "ratings_small.csv")
    examples = load.apply()
    counters = load.get_counters()
    stamps = [e.ts for e in examples]
    assert stamps == sorted(stamps)
    assert len(examples) == counters["rows"] - counters["skipped"] - counters["rejected"]
    assert len(examples) > 1000


def test_user_bucket_sample_keeps_whole_users(fixtures):
    sample = UserBucketSample(buckets=4, keep=2)
    full = MovieLensLoad(fixtures / "ratings_small.csv").apply()
    kept = MovieLensLoad(fixtures / "ratings_small.csv", sample).apply()
    kept_users = {e.features[0].id for e in kept}
    assert 0 < len(kept) < len(full)
    assert len(kept) == sum(e.features[0].id in kept_users for e in full)


def test_missing_movielens_file(tmp_path):
    with pytest.raises(DataFileMissing):
        MovieLensLoad(tmp_path / "absent.csv").apply()


# criteo

def test_criteo_fixture(fixtures):
    load = CriteoLoad(fixtures / "criteo_small.tsv")
    examples = load.apply()
    assert len(examples) == 600
    assert load.get_counters()["skipped"] == 1
    assert all(len(e.features) == 39 for e in examples)
    assert [e.ts for e in examples] == sorted(e.ts for e in examples)


def test_criteo_is_deterministic(fixtures):
    first = CriteoLoad(fixtures / "criteo_small.tsv", limit=50).apply()
    second = CriteoLoad(fixtures / "criteo_small.tsv", limit=50).apply()
    assert first == second


def test_criteo_slot_prefix(fixtures):
    examples = CriteoLoad(fixtures / "criteo_small.tsv", limit=20, num_slots=14).apply()
    assert all([k.table_id for k in e.features] == list(range(14)) for e in examples)


def test_integer_tokens():
    assert integer_token("") == MISSING_TOKEN
    assert integer_token("2") == "2"
    assert integer_token("100") == f"b{int(math.log(100) ** 2)}"


def test_missing_criteo_file(tmp_path):
    with pytest.raises(DataFileMissing):
        CriteoLoad(tmp_path / "absent.tsv").apply()


# collisions

def test_collision_rate_movielens_users():
    assert round(100 * collision_rate(162_541, 149_970), 2) == 7.73


def test_collision_rate_movielens_movies():
    assert round(100 * collision_rate(59_047, 57_361), 2) == 2.86


def test_injective_reducer_has_no_collisions(fixtures):
    stats = hash_collision_stats(read_ids(fixtures / "user_ids.txt"), lambda i: i)
    assert stats.before == stats.after == 5000
    assert stats.rate == 0.0


def test_md5_reduction_matches_balls_in_bins(fixtures):
    ids = read_ids(fixtures / "user_ids.txt")
    space = 10_000
    stats = hash_collision_stats(ids, Md5Reducer(space))
    expected = expected_distinct(len(ids), space)
    sigma = expected_distinct_std(len(ids), space)
    assert stats.before == 5000
    assert abs(stats.after - expected) <= 3 * sigma
    assert stats.rate == pytest.approx((stats.before - stats.after) / stats.before)


def quotient_remainder_rows(key_id):
    return [("q", key_id >> 3), ("r", key_id & 7)]


def test_shared_row_rate():
    assert shared_row_rate(range(16), quotient_remainder_rows) == 1.0
    assert shared_row_rate([0, 9, 18], quotient_remainder_rows) == 0.0
    assert shared_row_rate([0, 1, 18], quotient_remainder_rows) == pytest.approx(2 / 3)
    assert shared_row_rate(range(100), lambda i: [i]) == 0.0
    assert shared_row_rate([], quotient_remainder_rows) == 0.0


def test_md5_reducer_is_stable():
    reducer = Md5Reducer(1 << 20)
    assert reducer(123456789) == reducer.reduce(123456789)
    assert 0 <= reducer(2**64 - 1) < 1 << 20


def test_expected_distinct_limits():
    assert expected_distinct(0, 100) == 0.0
    assert expected_distinct(1, 100) == pytest.approx(1.0)
    assert expected_distinct(10_000, 10) == pytest.approx(10.0)


# sharding

def test_split_even():
    shards = split_shards(list(range(10)), 2)
    assert shards == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]


def test_split_single_shard_is_identity():
    assert split_shards(list(range(7)), 1) == [list(range(7))]


def test_split_concatenates_back():
    items = list(range(103))
    shards = split_shards(items, 8)
    assert [x for shard in shards for x in shard] == items
    assert max(map(len, shards)) - min(map(len, shards)) <= 1


def test_split_needs_enough_examples():
    with pytest.raises(AssertionError):
        split_shards([1, 2], 3)


# drift

def test_drift_is_deterministic():
    config = DriftConfig(num_ids=50, num_examples=500, seed=3)
    assert SyntheticDrift(config).apply() == SyntheticDrift(config).apply()


def test_drift_seed_changes_stream():
    first = SyntheticDrift(DriftConfig(num_ids=50, num_examples=500, seed=3)).apply()
    second = SyntheticDrift(DriftConfig(num_ids=50, num_examples=500, seed=4)).apply()
    assert first != second


def test_stationary_stream():
    drift = SyntheticDrift(DriftConfig(drift_amplitude=0.0, num_examples=100))
    assert np.allclose(drift.probability(np.arange(1, 11), np.arange(10)), 0.3)


def test_static_offsets_do_not_move():
    drift = SyntheticDrift(DriftConfig(num_ids=20, base_ctr=0.5, drift_amplitude=0.0, static_spread=0.2, seed=2))
    ranks = np.arange(1, 21)
    first = drift.probability(ranks, 0)
    assert np.array_equal(first, drift.probability(ranks, 12_345))
    assert np.all(np.abs(first - 0.5) <= 0.2)
    assert np.ptp(first) > 0.1


def test_drift_config_bounds():
    with pytest.raises(ValueError):
        DriftConfig(base_ctr=0.1, drift_amplitude=0.2)
    with pytest.raises(ValueError):
        DriftConfig(base_ctr=0.5, drift_amplitude=0.3, static_spread=0.25)
    with pytest.raises(ValueError):
        DriftConfig(zipf_exponent=0.0)


def test_ids_follow_zipf():
    config = DriftConfig(num_ids=1000, zipf_exponent=1.1, num_examples=50_000, seed=11)
    counts = Counter(e.features[0].id for e in SyntheticDrift(config).apply())
    ranks = np.arange(1, 31)
    freq = np.array([counts[r] for r in ranks], dtype=np.float64)
    slope = np.polyfit(np.log(ranks), np.log(freq), 1)[0]
    assert slope == pytest.approx(-1.1, abs=0.15)


def test_positive_rate_tracks_sinusoid():
    config = DriftConfig(num_ids=100, num_examples=40_000, drift_period=10_000, seed=5)
    drift = SyntheticDrift(config)
    examples = drift.apply()
    ranks = np.array([e.features[0].id for e in examples])
    labels = np.array([e.label for e in examples])
    p = drift.probability(ranks, np.arange(len(examples)))

    window = 2000
    for start in range(0, len(examples), window):
        expected = p[start:start + window]
        sigma = math.sqrt(float(np.sum(expected * (1 - expected)))) / window
        assert abs(labels[start:start + window].mean() - expected.mean()) <= 4 * sigma
