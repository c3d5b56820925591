from dataclasses import dataclass

@dataclass(frozen=True)
class ActionKindEnum:

    # positive kinds
    CLICK: str = "click"
    LIKE: str = "like"
    CONVERT: str = "convert"

    # negative-or-none kinds
    SKIP: str = "skip"
    NONE: str = "none"

    def is_positive(self, kind: str) -> bool:
        match kind:
            case self.CLICK | self.LIKE | self.CONVERT:
                return True
            case self.SKIP | self.NONE:
                return False
        raise ValueError(f"Unknown action kind: {kind}")
