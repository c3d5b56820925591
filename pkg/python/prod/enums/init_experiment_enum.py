from .subcommand_enum import SubcommandEnum as Subcommand
from ..trainer.collision_experiment import CollisionExperiment
from ..trainer.joiner_simulation import JoinerSimulation
from ..trainer.reliability_experiment import ReliabilityExperiment
from ..trainer.sync_bench import SyncBench
from ..trainer.sync_sweep import SyncSweep

DEFAULT_SUBCOMMAND = Subcommand.ONLINE_EXP

class InitExperimentEnum:

    def apply(self, config, subcommand = DEFAULT_SUBCOMMAND, workdir = None, notify = None, verbose = False, input_path = None):
        match subcommand:
            case Subcommand.COLLISION_EXP:
                experiment = CollisionExperiment(config, workdir, notify, verbose)
            case Subcommand.ONLINE_EXP:
                experiment = SyncSweep(config, workdir, notify, verbose)
            case Subcommand.SYNC_BENCH:
                experiment = SyncBench(config, workdir, notify, verbose)
            case Subcommand.RELIABILITY_EXP:
                experiment = ReliabilityExperiment(config, workdir, notify, verbose)
            case Subcommand.JOINER_SIM:
                experiment = JoinerSimulation(config, workdir, notify, verbose, input_path=input_path)
            case _:
                raise ValueError(f"{subcommand} is not an experiment")

        return experiment
