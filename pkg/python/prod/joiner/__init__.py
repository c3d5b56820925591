from .feature_log import FeatureLog
from .action_log import ActionLog
from .joined_example import JoinedExample
from .joiner_config import JoinerConfig
from .joiner_counters import JoinerCounters
from .disk_store import DiskStore
from .example_queue import ExampleQueue, MemoryExampleQueue, FileExampleQueue
from .online_joiner import OnlineJoiner
from .negative_sampling import negative_sample, log_odds_correct, log_odds_correct_logit
from .tools.stream_records import StreamRecords, MalformedRecord
from .tools.synthetic_traffic import SyntheticTraffic, TrafficConfig
