from .shard_id import ShardId, partition
from .ps_shard import PSShard
from .snapshot_manifest import SnapshotManifest, ManifestFile
from .snapshot import Snapshot
from .restore import Restore
from .failure_plan import FailurePlan
from .ps_cluster import PSCluster
from .expected_feedback_loss import ExpectedFeedbackLoss, expected_feedback_loss
from .recovery_error import RecoveryError
from .snapshot_aborted import SnapshotAborted
