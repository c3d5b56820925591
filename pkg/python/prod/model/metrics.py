"""Evaluation metrics."""

from typing import Sequence

import numpy as np
import pandas as pd

from .undefined_metric import UndefinedMetric

#: Probabilities are clamped into [EPS, 1 - EPS] before taking logs
LOG_LOSS_EPS = 1e-7


def auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Rank-based ROC AUC.

    Tied scores get their average rank, so each tied positive/negative
    pair counts one half.

    :raise UndefinedMetric:
        Labels hold a single class
    """
    y = np.asarray(labels)
    assert len(y) == len(scores), f"Got {len(scores)} scores for {len(y)} labels"
    positives = int((y == 1).sum())
    negatives = len(y) - positives
    if positives == 0 or negatives == 0:
        raise UndefinedMetric("AUC", positives, negatives)

    ranks = pd.Series(np.asarray(scores, dtype=np.float64)).rank(method="average").to_numpy()
    rank_sum = ranks[y == 1].sum()
    return float((rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives))


def log_loss(probabilities, labels) -> np.ndarray:
    """Elementwise ``-[y log p + (1 - y) log(1 - p)]`` with clamped p."""
    p = np.clip(np.asarray(probabilities, dtype=np.float64), LOG_LOSS_EPS, 1.0 - LOG_LOSS_EPS)
    y = np.asarray(labels, dtype=np.float64)
    return -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
