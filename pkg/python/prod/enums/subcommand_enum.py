from dataclasses import dataclass

@dataclass(frozen=True)
class SubcommandEnum:
    COLLISION_EXP: str = "collision-exp"
    ONLINE_EXP: str = "online-exp"
    SYNC_BENCH: str = "sync-bench"
    RELIABILITY_EXP: str = "reliability-exp"
    JOINER_SIM: str = "joiner-sim"
    COLLISION_STATS: str = "collision-stats"
