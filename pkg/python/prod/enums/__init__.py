from .role_enum import RoleEnum
from .sync_action_enum import SyncActionEnum
from .timeout_policy_enum import TimeoutPolicyEnum
from .action_kind_enum import ActionKindEnum
from .data_source_enum import DataSourceEnum
from .subcommand_enum import SubcommandEnum
from .table_offset_enum import TableOffsetEnum
