import logging
import math
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
import xxhash

from ..store.feature_key import FeatureKey
from .data_file_missing import DataFileMissing
from .training_example import TrainingExample

logger = logging.getLogger(__name__)

NUM_INTEGER = 13
NUM_CATEGORICAL = 26
COLUMNS = ["label"] + [f"I{i}" for i in range(1, NUM_INTEGER + 1)] + [f"C{i}" for i in range(1, NUM_CATEGORICAL + 1)]
MISSING_TOKEN = "<missing>"


def integer_token(value: str) -> str:
    """Log-bucketise an integer count, small values stay exact."""
    if value == "":
        return MISSING_TOKEN
    x = int(value)
    if x > 2:
        return f"b{int(math.log(x) ** 2)}"
    return str(x)


def token_id(slot: int, token: str) -> int:
    """64-bit feature id of a raw token, seeded per slot."""
    return xxhash.xxh64_intdigest(token.encode("utf-8"), seed=slot)


class CriteoLoad:

    """Read a Criteo display-ads TSV (label, 13 integer and 26 categorical
    columns, no header).

    Every column becomes one feature slot: integers are log-bucketised,
    categorical hex strings are taken as they are, and the resulting
    token is mapped to a 64-bit id. The file has no timestamps, so the
    row number is the event time.
    """

    def __init__(self, path: str | Path, limit: Optional[int] = None, num_slots: int = NUM_INTEGER + NUM_CATEGORICAL):
        assert 1 <= num_slots <= NUM_INTEGER + NUM_CATEGORICAL, f"num_slots must be in [1, 39], got {num_slots}"
        self.__path = Path(path)
        self.__limit = limit
        self.__num_slots = num_slots
        self.__counters = {"rows": 0, "skipped": 0, "examples": 0}

    def get_counters(self) -> Dict[str, int]:
        return dict(self.__counters)

    def get_num_slots(self) -> int:
        return self.__num_slots

    def apply(self) -> List[TrainingExample]:
        if not self.__path.exists():
            raise DataFileMissing(str(self.__path), "Criteo TSV file")
        df = pd.read_csv(
            self.__path, sep="\t", header=None, dtype=str, keep_default_na=False,
            nrows=self.__limit, on_bad_lines="skip", engine="python",
        )
        self.__counters["rows"] = len(df)
        examples = []
        skipped = 0
        for row_number, row in enumerate(df.itertuples(index=False)):
            if len(row) != len(COLUMNS) or row[0] not in ("0", "1") or not all(isinstance(v, str) for v in row):
                skipped += 1
                continue
            try:
                tokens = [integer_token(v) for v in row[1:1 + NUM_INTEGER]]
            except ValueError:
                skipped += 1
                continue
            tokens += [v if v != "" else MISSING_TOKEN for v in row[1 + NUM_INTEGER:]]
            features = tuple(FeatureKey(slot, token_id(slot, tokens[slot])) for slot in range(self.__num_slots))
            examples.append(TrainingExample(features, int(row[0]), float(row_number)))

        self.__counters["skipped"] = skipped
        self.__counters["examples"] = len(examples)
        if skipped:
            logger.warning("%s: skipped %d malformed rows", self.__path, skipped)
        logger.info("Loaded %d Criteo examples with %d slots from %s", len(examples), self.__num_slots, self.__path)
        return examples
