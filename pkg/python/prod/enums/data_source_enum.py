from dataclasses import dataclass

@dataclass(frozen=True)
class DataSourceEnum:
    DRIFT: str = "drift"
    CRITEO: str = "criteo"
    MOVIELENS: str = "movielens"
