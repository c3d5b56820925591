"""Bunch of small utilities shared by the experiment drivers."""
import json
import logging
import os
from pathlib import Path
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


class BaseUtils():

    def __init__(self):
        pass

    def setup_console_logging(self, level: Optional[str] = None):
        """Set up coloured log output.

        Used by the command line entry point and experiment scripts.

        :param level:
            Log level name. Falls back to `LOG_LEVEL` environment variable, then `info`.
        """

        try:
            import coloredlogs
        except ImportError as e:
            raise RuntimeError("coloredlogs package missing - please install with pip first before running") from e

        level = (level or os.environ.get("LOG_LEVEL", "info")).upper()

        fmt = "%(asctime)s %(name)-44s %(message)s"
        date_fmt = "%H:%M:%S"
        coloredlogs.install(level=level, fmt=fmt, date_fmt=date_fmt)

    def ensure_directory(self, path: str | Path) -> Path:
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(self, path: str | Path, payload: dict):
        """Write a JSON document with sorted keys so reruns diff cleanly."""
        with open(path, "wt", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True, default=self._json_default)
            f.write("\n")

    def is_power_of_two(self, n: int) -> bool:
        return n > 0 and (n & (n - 1)) == 0

    def mean_and_std(self, values: list[float]) -> tuple[float, float]:
        """Mean and sample standard deviation (0 for a single value)."""
        assert len(values) > 0, "Need at least one value"
        x = np.asarray(values, dtype=np.float64)
        if len(x) == 1:
            return float(x[0]), 0.0
        return float(np.mean(x)), float(np.std(x, ddof=1))

    def _json_default(self, obj):
        if hasattr(obj, "item"):
            # numpy scalars
            return obj.item()
        if isinstance(obj, Path):
            return str(obj)
        raise TypeError(f"Not JSON serialisable: {type(obj)}")
