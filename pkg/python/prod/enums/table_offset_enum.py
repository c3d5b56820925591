from dataclasses import dataclass

@dataclass(frozen=True)
class TableOffsetEnum:
    """Table id ranges inside one cluster.

    Slot `s` embeds into table `s`; the width-1 linear table of any
    embedding table `t` is `LINEAR + t`; the decomposed baseline keeps
    its quotient embeddings in `QUOTIENT + s`.
    """

    EMBEDDING: int = 0
    QUOTIENT: int = 500
    LINEAR: int = 1000
