from .stream_records import StreamRecords, MalformedRecord
from .synthetic_traffic import SyntheticTraffic, TrafficConfig
