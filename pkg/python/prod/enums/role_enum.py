from dataclasses import dataclass

@dataclass(frozen=True)
class RoleEnum:
    TRAINING: str = "training"
    SERVING: str = "serving"
