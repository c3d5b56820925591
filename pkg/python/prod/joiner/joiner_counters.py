from dataclasses import dataclass, asdict


@dataclass
class JoinerCounters:

    features: int = 0

    #: Features whose request key was already pending, the newest kept
    duplicate_features: int = 0

    actions: int = 0

    joined: int = 0

    #: Joins whose features came back from the disk store
    joined_from_disk: int = 0

    #: Actions for a request that already joined
    duplicate_actions: int = 0

    #: Actions that arrived before their features
    buffered_actions: int = 0

    #: Buffered actions whose features never came
    action_misses: int = 0

    spilled: int = 0

    expired_dropped: int = 0

    expired_negative: int = 0

    #: Negatives removed by sampling
    sampled_out: int = 0

    compactions: int = 0

    def to_dict(self) -> dict:
        return asdict(self)
