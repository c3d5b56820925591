from .base_utils import BaseUtils
from .progress_update import ProgressUpdate
from .mixer import Mixer64, mix64
from .seeding import SeedExpander
