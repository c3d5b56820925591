from abc import *
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from ..model.deepfm import DeepFM
from ..model.deepfm_config import DeepFMConfig
from ..ps.ps_cluster import PSCluster
from ..utils.progress_update import ProgressUpdate
from ..utils.seeding import SeedExpander
from .experiment_config import ExperimentConfig
from .key_resolver import KeyResolver
from .metrics_row import MetricsRow
from .worker import Worker


@dataclass
class ExperimentResult:
    """What an experiment leaves behind: metrics rows, a summary and counters."""

    rows: List[MetricsRow] = field(default_factory=list)

    summary: Dict = field(default_factory=dict)

    counters: Dict = field(default_factory=dict)


class Experiment(ABC):

    """Base of the experiment drivers.

    Drivers are sequential; all randomness comes from the config seed
    through :py:class:`SeedExpander`, so equal configs give equal rows.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        workdir: Optional[str | Path] = None,
        notify: Optional[ProgressUpdate] = None,
        verbose: bool = False,
    ):
        self.config = config
        self.workdir = Path(workdir) if workdir is not None else None
        self.notify = notify
        self.verbose = verbose

    @abstractmethod
    def apply(self) -> ExperimentResult:
        pass

    def run_config(self, run: int) -> ExperimentConfig:
        """Config of repeated run `run`, seeded `seed + run`."""
        return self.config.with_seed(self.config.experiment.seed + run)

    def new_worker(
        self,
        config: ExperimentConfig,
        resolver: Optional[KeyResolver] = None,
        snapshot_root: Optional[Path] = None,
        with_failures: bool = False,
        model_config: Optional[DeepFMConfig] = None,
    ) -> Worker:
        """Fresh cluster and worker, seeded from `config`.

        :param model_config:
            Model shape when it does not follow from the data source
        """
        seeds = SeedExpander(config.experiment.seed)
        model_config = model_config or config.model_config()
        cluster_config = config.cluster
        cluster = PSCluster(
            num_shards=cluster_config.shards,
            table_template=config.table_config(),
            model_config=model_config,
            seeds=seeds,
            dense_lr=config.train.dense_lr,
            snapshot_root=snapshot_root,
            snapshot_every=cluster_config.snapshot_every if snapshot_root is not None else 0,
            snapshot_keep=cluster_config.snapshot_keep,
            failure_plan=cluster_config.failure_plan() if with_failures else None,
            evict_every=cluster_config.evict_every,
        )
        return Worker(
            DeepFM(model_config), cluster, config.train, resolver,
            rng=seeds.generator("admission"), notify=self.notify, verbose=self.verbose,
        )
