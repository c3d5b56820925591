import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from ..store.feature_key import FeatureKey
from .data_file_missing import DataFileMissing
from .raw_rating import MAX_RATING, MIN_RATING, RawRating
from .training_example import TrainingExample
from .user_bucket_sample import UserBucketSample

logger = logging.getLogger(__name__)

COLUMNS = ["userId", "movieId", "rating", "timestamp"]

#: Feature slots of a rating example
USER_SLOT = 0
MOVIE_SLOT = 1


class MovieLensLoad:

    """Read a MovieLens `ratings.csv` into a chronological example stream.

    Each example has a user slot and a movie slot, labelled positive for
    ratings of 3.5 and up. Malformed rows are skipped, out-of-scale
    ratings rejected; both are counted.
    """

    def __init__(self, path: str | Path, sample: Optional[UserBucketSample] = None):
        self.__path = Path(path)
        self.__sample = sample
        self.__counters = {"rows": 0, "skipped": 0, "rejected": 0, "examples": 0}

    def get_counters(self) -> Dict[str, int]:
        return dict(self.__counters)

    def read_frame(self) -> pd.DataFrame:
        """Validated ratings, sorted by timestamp (stable)."""
        if not self.__path.exists():
            raise DataFileMissing(str(self.__path), "MovieLens ratings file")
        raw = pd.read_csv(self.__path, dtype=str, keep_default_na=False)
        missing = [c for c in COLUMNS if c not in raw.columns]
        if missing:
            raise ValueError(f"{self.__path} lacks columns {missing}")

        df = pd.DataFrame({c: pd.to_numeric(raw[c], errors="coerce") for c in COLUMNS})
        self.__counters["rows"] = len(df)
        malformed = df.isna().any(axis=1)
        ids_ok = (df["userId"] >= 0) & (df["movieId"] >= 0) & (df["userId"] % 1 == 0) & (df["movieId"] % 1 == 0)
        malformed |= ~ids_ok
        df = df[~malformed]
        self.__counters["skipped"] = int(malformed.sum())

        in_scale = df["rating"].between(MIN_RATING, MAX_RATING)
        self.__counters["rejected"] = int((~in_scale).sum())
        df = df[in_scale]

        if self.__sample is not None:
            df = df[self.__sample.mask(df["userId"].to_numpy())]

        df = df.astype({"userId": np.int64, "movieId": np.int64, "rating": np.float64, "timestamp": np.float64})
        if self.__counters["skipped"] or self.__counters["rejected"]:
            logger.warning(
                "%s: skipped %d malformed rows, rejected %d out-of-scale ratings",
                self.__path, self.__counters["skipped"], self.__counters["rejected"],
            )
        return df.sort_values("timestamp", kind="mergesort").reset_index(drop=True)

    def ratings(self) -> List[RawRating]:
        df = self.read_frame()
        return [
            RawRating(int(u), int(m), float(r), float(t))
            for u, m, r, t in zip(df["userId"], df["movieId"], df["rating"], df["timestamp"])
        ]

    def apply(self) -> List[TrainingExample]:
        examples = [
            TrainingExample(
                (FeatureKey(USER_SLOT, r.user_id), FeatureKey(MOVIE_SLOT, r.movie_id)), r.get_label(), r.ts
            )
            for r in self.ratings()
        ]
        self.__counters["examples"] = len(examples)
        logger.info("Loaded %d MovieLens examples from %s", len(examples), self.__path)
        return examples
