from .touched_keys import TouchedKeys
from .sync_packet import SyncPacket, PacketSection
from .packet_codec import PacketCodec, CorruptPacket
from .sync_schedule import SyncSchedule, should_sync
from .stale_packet import StalePacket
from .parameter_sync import ParameterSync, estimate_packet_bytes
