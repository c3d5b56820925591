import argparse
import sys
from typing import List, Optional

from ..enums.subcommand_enum import SubcommandEnum as Subcommand
from ..utils.base_utils import BaseUtils
from .command import Command
from .run_command import RunCommand

EXPERIMENTS = {
    Subcommand.COLLISION_EXP: "collisionless against hashed embeddings, per-epoch test AUC",
    Subcommand.ONLINE_EXP: "online against frozen batch training over the sync sweep",
    Subcommand.SYNC_BENCH: "bytes and freshness of the sync schedule",
    Subcommand.RELIABILITY_EXP: "paired runs with a shard failure and snapshot restore",
    Subcommand.JOINER_SIM: "online joiner feeding training",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cuckoorec", description="Collisionless embedding tables and online training experiments")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging and progress bars")

    experiment = argparse.ArgumentParser(add_help=False)
    experiment.add_argument("--config", required=True, help="Experiment config file")
    experiment.add_argument("--out", default="out", help="Output directory (default: out)")
    experiment.add_argument("--seed", type=int, help="Override [experiment] seed")
    experiment.add_argument("--shards", type=int, help="Override [cluster] shards")
    experiment.add_argument("--sync-interval", type=int, help="Override [sync] sparse_interval, in steps")
    experiment.add_argument("--dense-interval", type=int, help="Override [sync] dense_interval, in steps")
    experiment.add_argument("--snapshot-every", type=int, help="Override [cluster] snapshot_every, in steps")
    experiment.add_argument("--fail-shard", type=int, help="Training shard to crash")
    experiment.add_argument("--fail-at", type=int, help="Step after which the shard crashes")

    for name, help_text in EXPERIMENTS.items():
        sub = subparsers.add_parser(name, parents=[common, experiment], help=help_text, description=help_text)
        if name == Subcommand.JOINER_SIM:
            sub.add_argument("--input", help="Stream record file to replay instead of synthetic traffic")

    stats = subparsers.add_parser(Subcommand.COLLISION_STATS, parents=[common], help="Distinct ids before and after MD5 reduction")
    stats.add_argument("--ids", required=True, help="File with one integer id per line")
    stats.add_argument("--space", type=int, default=1 << 20, help="Reduced id space (default: 1048576)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    command = Command.from_args(args)
    BaseUtils().setup_console_logging("debug" if command.verbose else "info")
    return RunCommand().apply(command)


def console_entry():
    sys.exit(main())
