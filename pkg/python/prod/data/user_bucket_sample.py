from dataclasses import dataclass

import numpy as np

from ..utils.mixer import Mixer64

#: Mixer seed of the bucket assignment, fixed so subsets are stable across runs
BUCKET_SEED = 0xB0C4E7


@dataclass(frozen=True)
class UserBucketSample:
    """Deterministic subsample that keeps or drops whole users.

    A user is kept when its mixed id falls in the first `keep` of
    `buckets` buckets, so every rating of a kept user survives.
    """

    buckets: int = 100

    keep: int = 100

    def __post_init__(self):
        assert 0 < self.keep <= self.buckets, f"Need 0 < keep <= buckets, got {self.keep} of {self.buckets}"

    def keeps(self, user_id: int) -> bool:
        return Mixer64(BUCKET_SEED).hash(user_id) % self.buckets < self.keep

    def mask(self, user_ids) -> np.ndarray:
        return np.fromiter((self.keeps(int(u)) for u in user_ids), dtype=bool, count=len(user_ids))
