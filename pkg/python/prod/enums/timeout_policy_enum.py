from dataclasses import dataclass

@dataclass(frozen=True)
class TimeoutPolicyEnum:
    DROP: str = "drop"
    EMIT_NEGATIVE: str = "emit_negative"
