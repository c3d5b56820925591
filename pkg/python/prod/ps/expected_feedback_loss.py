import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ExpectedFeedbackLoss:
    """What training-PS failures cost when shards recover from snapshots."""

    #: Shard failures per day over the whole cluster
    failures_per_day: float

    #: Users whose feedback since the last snapshot is lost per failure
    users_per_failure: float

    #: Mean days between two failures anywhere in the cluster, inf if none fail
    mean_days_between_failures: float


def expected_feedback_loss(num_shards: int, daily_failure_rate: float, dau: int, snapshot_interval_days: float) -> ExpectedFeedbackLoss:
    """
    :param num_shards:
        Training PS machines, users spread evenly over them

    :param daily_failure_rate:
        Failure probability of one machine per day

    :param dau:
        Daily active users

    :param snapshot_interval_days:
        Days between snapshots, the worst-case window of lost updates
    """
    assert num_shards >= 1, f"Need at least one shard, got {num_shards}"
    assert 0.0 <= daily_failure_rate <= 1.0, f"Failure rate must be in [0, 1], got {daily_failure_rate}"
    assert dau >= 0 and snapshot_interval_days > 0, "DAU and snapshot interval must be non-negative"

    failures_per_day = num_shards * daily_failure_rate
    users_per_failure = dau / num_shards * snapshot_interval_days
    mean_days = 1.0 / failures_per_day if failures_per_day > 0 else math.inf
    return ExpectedFeedbackLoss(failures_per_day, users_per_failure, mean_days)
