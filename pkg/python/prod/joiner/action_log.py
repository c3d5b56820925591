from dataclasses import dataclass


@dataclass(frozen=True)
class ActionLog:
    """What the user did with the result of a request."""

    request_key: int

    #: One of :py:class:`ActionKindEnum`
    action: str

    #: Event time in seconds
    ts: float
