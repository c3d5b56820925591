"""Experiment configuration files.

Flat ``key = value`` INI files with sections; every section maps onto one
frozen dataclass and every key onto one of its fields::

    [experiment]
    name = criteo-small
    seed = 7
    source = criteo
    data = fixtures/criteo_small.tsv

    [model]
    dim = 8
    mlp_layers = 32, 16, 1

Missing sections and keys keep their defaults. Relative data paths are
resolved against the directory of the config file.
"""

import configparser
import logging
from dataclasses import MISSING, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from ..data.data_file_missing import DataFileMissing
from ..data.drift_config import DriftConfig
from ..joiner.joiner_config import JoinerConfig
from ..joiner.tools.synthetic_traffic import TrafficConfig
from ..store.table_config import TableConfig
from ..sync.sync_schedule import SyncSchedule
from .config_error import ConfigError
from .experiment_config import (
    ClusterConfig,
    CollisionConfig,
    ExperimentConfig,
    ExperimentSettings,
    ModelSettings,
    TrainConfig,
)

logger = logging.getLogger(__name__)

#: Fields that are derived, never read from a file
DERIVED = {"table": {"dim", "hash_seeds"}, "drift": {"seed"}}


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "yes", "true", "on"):
        return True
    if value in ("0", "no", "false", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def _ints(text: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in text.replace(",", " ").split())


def _optional_float(text: str) -> Optional[float]:
    return None if text.strip().lower() in ("", "none") else float(text)


CONVERTERS: Dict[Any, Callable[[str], Any]] = {
    int: lambda text: int(text, 0),
    float: float,
    bool: _bool,
    str: lambda text: text.strip(),
    Tuple[int, ...]: _ints,
    Tuple[int, int]: _ints,
    Optional[float]: _optional_float,
}


class ConfigLoad:

    """Parse and validate an experiment config file into :py:class:`ExperimentConfig`.

    Unknown sections, unknown keys and unparsable values raise
    :py:class:`ConfigError` naming the field, before any work starts.
    """

    def apply(self, path: str | Path) -> ExperimentConfig:
        path = Path(path)
        if not path.exists():
            raise DataFileMissing(str(path), "config file")
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as e:
            raise ConfigError("file", None, f"{path}: {e}") from e
        config = self.from_parser(parser)

        data = config.experiment.data
        if data and not Path(data).is_absolute():
            resolved = (path.parent / data).resolve()
            config = replace(config, experiment=replace(config.experiment, data=str(resolved)))
        config.validate()
        logger.info("Loaded config %s (%s)", path, config.experiment.name)
        return config

    def from_text(self, text: str) -> ExperimentConfig:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as e:
            raise ConfigError("file", None, str(e)) from e
        config = self.from_parser(parser)
        config.validate()
        return config

    def from_parser(self, parser: configparser.ConfigParser) -> ExperimentConfig:
        known = {"experiment", "model", "table", "cluster", "sync", "train", "drift", "collision", "joiner"}
        for section in parser.sections():
            if section not in known:
                raise ConfigError(section, None, "unknown section")

        experiment = self.__build(parser, "experiment", ExperimentSettings)
        model = self.__build(parser, "model", ModelSettings)
        table = self.__build(parser, "table", TableConfig, dim=model.dim)
        cluster = self.__build(parser, "cluster", ClusterConfig)
        sync = self.__build(parser, "sync", SyncSchedule, defaults={"sparse_interval": 1, "dense_interval": 1})
        train = self.__build(parser, "train", TrainConfig)
        drift = self.__build(parser, "drift", DriftConfig, seed=experiment.seed)
        collision = self.__build(parser, "collision", CollisionConfig)

        joiner_values = dict(parser.items("joiner")) if parser.has_section("joiner") else {}
        traffic_keys = {f.name for f in fields(TrafficConfig)}
        joiner = self.__build_from(
            "joiner", JoinerConfig, {k: v for k, v in joiner_values.items() if k not in traffic_keys},
            defaults={"memory_window": 60.0, "disk_ttl": 600.0},
        )
        traffic = self.__build_from("joiner", TrafficConfig, {k: v for k, v in joiner_values.items() if k in traffic_keys})

        return ExperimentConfig(experiment, model, table, cluster, sync, train, drift, collision, joiner, traffic)

    def __build(self, parser, section: str, cls, defaults: Optional[dict] = None, **fixed):
        values = dict(parser.items(section)) if parser.has_section(section) else {}
        return self.__build_from(section, cls, values, defaults, **fixed)

    def __build_from(self, section: str, cls, values: Dict[str, str], defaults: Optional[dict] = None, **fixed):
        derived = DERIVED.get(section, set())
        known = {f.name: f for f in fields(cls)}
        kwargs = dict(defaults or {})
        for key, text in values.items():
            if key not in known or key in derived:
                raise ConfigError(section, key, "unknown key")
            converter = CONVERTERS.get(known[key].type)
            if converter is None:
                raise ConfigError(section, key, "cannot be set from a config file")
            try:
                kwargs[key] = converter(text)
            except ValueError as e:
                raise ConfigError(section, key, f"bad value {text!r}: {e}") from e
        kwargs.update(fixed)
        for name, f in known.items():
            if name not in kwargs and f.default is MISSING and f.default_factory is MISSING:
                raise ConfigError(section, name, "required")
        try:
            return cls(**kwargs)
        except ValueError as e:
            raise ConfigError(section, None, str(e)) from e
