from dataclasses import dataclass, asdict, fields
from pathlib import Path
from typing import List

import pandas as pd

#: Columns left out of metrics.csv so reruns stay byte-identical
VOLATILE_COLUMNS = ("wall_time",)


@dataclass(frozen=True)
class MetricsRow:
    """One evaluation point of an experiment."""

    #: Which arm or configuration produced the row, e.g. "online/N=50"
    arm: str

    #: Repeated-run index
    run: int

    #: Epoch, online shard index or training step, depending on the experiment
    step: int

    #: In [0, 1], NaN when the evaluated slice holds a single class
    auc: float

    log_loss: float

    #: Examples trained on so far
    examples: int

    #: Sync bytes put on the wire so far
    packet_bytes: int = 0

    #: Seconds since the run started
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


class MetricsTable:

    """Accumulates :py:class:`MetricsRow` and writes them as CSV."""

    def __init__(self, rows: List[MetricsRow] = None):
        self.__rows: List[MetricsRow] = list(rows or [])

    def __len__(self) -> int:
        return len(self.__rows)

    def append(self, row: MetricsRow):
        self.__rows.append(row)

    def extend(self, rows: List[MetricsRow]):
        self.__rows.extend(rows)

    def get_rows(self) -> List[MetricsRow]:
        return list(self.__rows)

    def to_dataframe(self) -> pd.DataFrame:
        columns = [f.name for f in fields(MetricsRow)]
        return pd.DataFrame([row.to_dict() for row in self.__rows], columns=columns)

    def write_csv(self, path: str | Path):
        df = self.to_dataframe().drop(columns=list(VOLATILE_COLUMNS))
        df.to_csv(path, index=False, float_format="%.6f", lineterminator="\n")
