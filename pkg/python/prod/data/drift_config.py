from dataclasses import dataclass


@dataclass(frozen=True)
class DriftConfig:
    """Synthetic stream whose per-id click rates move over time."""

    #: Distinct ids in the drifting slot
    num_ids: int = 1000

    #: Id popularity follows rank^-zipf_exponent
    zipf_exponent: float = 1.1

    #: Steps (examples) per full oscillation
    drift_period: int = 20_000

    #: Mean click rate
    base_ctr: float = 0.3

    #: Peak deviation from the mean, 0 for a stationary stream
    drift_amplitude: float = 0.2

    #: Half-width of a fixed per-id offset from base_ctr, the part of the signal that never moves
    static_spread: float = 0.0

    seed: int = 0

    num_examples: int = 50_000

    #: Slot 0 drifts, the rest carry uninformative context ids
    num_slots: int = 2

    #: Distinct ids per context slot
    context_ids: int = 100

    def __post_init__(self):
        if self.num_ids < 1:
            raise ValueError(f"num_ids must be >= 1, got {self.num_ids}")
        if self.zipf_exponent <= 0:
            raise ValueError(f"zipf_exponent must be > 0, got {self.zipf_exponent}")
        if self.drift_period < 1:
            raise ValueError(f"drift_period must be >= 1, got {self.drift_period}")
        if self.drift_amplitude < 0 or self.static_spread < 0:
            raise ValueError(f"drift_amplitude and static_spread must be >= 0, got {self.drift_amplitude} and {self.static_spread}")
        reach = self.drift_amplitude + self.static_spread
        if not (0.0 < self.base_ctr - reach and self.base_ctr + reach < 1.0):
            raise ValueError(
                f"base_ctr {self.base_ctr} +/- drift_amplitude {self.drift_amplitude} + static_spread {self.static_spread} must stay inside (0, 1)"
            )
        if self.num_examples < 1 or self.num_slots < 1 or self.context_ids < 1:
            raise ValueError("num_examples, num_slots and context_ids must be >= 1")
