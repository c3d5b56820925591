import math
from dataclasses import replace
from typing import Optional

import numpy as np

from .joined_example import JoinedExample


def negative_sample(example: JoinedExample, r: float, rng: np.random.Generator) -> Optional[JoinedExample]:
    """Keep every positive, keep negatives with probability `r`.

    :return:
        The example, flagged `sampled` when r < 1, or None if dropped
    """
    assert 0.0 < r <= 1.0, f"Sampling rate must be in (0, 1], got {r}"
    if r == 1.0:
        return example
    if example.label == 0 and rng.random() >= r:
        return None
    return replace(example, sampled=True)


def log_odds_correct(p: float, r: float) -> float:
    """Undo the bias of keeping negatives at rate `r`.

    ``p' = p / (p + (1 - p) / r)``, the same as adding ``ln r`` to the logit.
    """
    assert 0.0 < p < 1.0, f"Probability must be in (0, 1), got {p}"
    assert 0.0 < r <= 1.0, f"Sampling rate must be in (0, 1], got {r}"
    return p / (p + (1.0 - p) / r)


def log_odds_correct_logit(logit: float, r: float) -> float:
    assert 0.0 < r <= 1.0, f"Sampling rate must be in (0, 1], got {r}"
    return logit + math.log(r)
