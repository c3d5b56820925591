import logging
import sys
from pathlib import Path
from typing import TextIO

from ..data.collision_stats import hash_collision_stats
from ..data.data_file_missing import DataFileMissing
from ..data.md5_reducer import Md5Reducer
from ..enums.data_source_enum import DataSourceEnum as DataSource
from ..enums.init_experiment_enum import InitExperimentEnum
from ..enums.subcommand_enum import SubcommandEnum as Subcommand
from ..trainer.config_error import ConfigError
from ..trainer.config_load import ConfigLoad
from ..trainer.metrics_row import MetricsTable
from ..utils.base_utils import BaseUtils
from .command import Command

logger = logging.getLogger(__name__)

#: Exit codes
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_MISSING_DATA = 3

METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "summary.json"
COUNTERS_FILE = "counters.json"


class RunCommand:

    """Run one :py:class:`Command` and map failures to exit codes.

    - Bad config: 2, with the offending field
    - Missing config or data file: 3
    - Anything else: 1, naming the stage that failed

    Nothing is written outside the output directory.
    """

    def __init__(self, stdout: TextIO = None, stderr: TextIO = None):
        self.__stdout = stdout or sys.stdout
        self.__stderr = stderr or sys.stderr
        self.__stage = "startup"

    def get_stage(self) -> str:
        return self.__stage

    def apply(self, command: Command) -> int:
        try:
            if command.subcommand == Subcommand.COLLISION_STATS:
                self.collision_stats(command)
            else:
                self.experiment(command)
        except ConfigError as e:
            self.__error(f"bad config: {e}")
            return EXIT_BAD_CONFIG
        except DataFileMissing as e:
            self.__error(f"{self.__stage} failed: {e}")
            return EXIT_MISSING_DATA
        except Exception as e:
            logger.debug("Stage %s failed", self.__stage, exc_info=True)
            self.__error(f"{self.__stage} failed: {type(e).__name__}: {e}")
            return EXIT_FAILED
        return EXIT_OK

    def collision_stats(self, command: Command):
        self.__stage = "ids"
        if command.ids is None:
            raise ConfigError("collision-stats", "ids", "--ids is required")
        if command.space < 1:
            raise ConfigError("collision-stats", "space", "--space must be >= 1")
        path = Path(command.ids)
        if not path.exists():
            raise DataFileMissing(str(path), "ids file")
        with open(path, "rt", encoding="utf-8") as f:
            ids = [int(line) for line in f if line.strip()]

        self.__stage = "collision-stats"
        stats = hash_collision_stats(ids, Md5Reducer(command.space))
        print(f"before {stats.before}", file=self.__stdout)
        print(f"after {stats.after}", file=self.__stdout)
        print(f"rate {stats.rate:.4%}", file=self.__stdout)

    def experiment(self, command: Command):
        self.__stage = "config"
        if command.config is None:
            raise ConfigError(command.subcommand, "config", "--config is required")
        config = ConfigLoad().apply(command.config).with_overrides(**command.overrides())
        source = config.experiment
        if source.source != DataSource.DRIFT and not Path(source.data).exists():
            raise DataFileMissing(source.data)
        if command.input is not None and not Path(command.input).exists():
            raise DataFileMissing(command.input, "stream file")

        utils = BaseUtils()
        out = utils.ensure_directory(command.out)
        experiment = InitExperimentEnum().apply(
            config, command.subcommand, workdir=out, verbose=command.verbose, input_path=command.input,
        )

        self.__stage = command.subcommand
        logger.info("Running %s, seed %d, output in %s", command.subcommand, config.experiment.seed, out)
        result = experiment.apply()

        self.__stage = "output"
        MetricsTable(result.rows).write_csv(out / METRICS_FILE)
        utils.write_json(out / SUMMARY_FILE, result.summary)
        utils.write_json(out / COUNTERS_FILE, result.counters)
        logger.info("Wrote %d metrics rows to %s", len(result.rows), out / METRICS_FILE)

    def __error(self, message: str):
        print(f"cuckoorec: {message}", file=self.__stderr)
