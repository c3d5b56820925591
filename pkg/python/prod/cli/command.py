import argparse
from dataclasses import dataclass, fields
from typing import Optional


@dataclass(frozen=True)
class Command:
    """One parsed command line."""

    #: One of :py:class:`SubcommandEnum`
    subcommand: str

    config: Optional[str] = None

    #: Output directory, metrics files land here
    out: str = "out"

    seed: Optional[int] = None

    shards: Optional[int] = None

    sync_interval: Optional[int] = None

    dense_interval: Optional[int] = None

    snapshot_every: Optional[int] = None

    fail_shard: Optional[int] = None

    fail_at: Optional[int] = None

    verbose: bool = False

    #: collision-stats: file of ids, one per line
    ids: Optional[str] = None

    #: collision-stats: reduced id space
    space: int = 1 << 20

    #: joiner-sim: stream record file replacing the synthetic traffic
    input: Optional[str] = None

    @staticmethod
    def from_args(args: argparse.Namespace) -> "Command":
        names = {f.name for f in fields(Command)}
        return Command(**{k: v for k, v in vars(args).items() if k in names and v is not None})

    def overrides(self) -> dict:
        """Config overrides given on the command line."""
        return dict(
            seed=self.seed, shards=self.shards, sync_interval=self.sync_interval,
            dense_interval=self.dense_interval, snapshot_every=self.snapshot_every,
            fail_shard=self.fail_shard, fail_at=self.fail_at,
        )
