from dataclasses import dataclass

@dataclass(frozen=True)
class SyncActionEnum:
    NONE: str = "none"
    SPARSE_ONLY: str = "sparse_only"
    SPARSE_AND_DENSE: str = "sparse_and_dense"
