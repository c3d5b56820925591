"""Tab-separated text records of the joiner streams::

    F <request_key> <ts> <slot:id,...>
    A <request_key> <ts> <action>
    E <ts> <label> <slot:id,...>
"""

from pathlib import Path
from typing import Iterator, Tuple, Union

from ...store.feature_key import FeatureKey
from ..action_log import ActionLog
from ..feature_log import FeatureLog
from ..joined_example import JoinedExample

Record = Union[FeatureLog, ActionLog, JoinedExample]


class MalformedRecord(ValueError):

    def __init__(self, line: str, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"Malformed stream record {line!r}: {reason}")


class StreamRecords:

    def format_feature(self, log: FeatureLog) -> str:
        return f"F\t{log.request_key}\t{log.ts!r}\t{self.format_features(log.features)}"

    def format_action(self, log: ActionLog) -> str:
        return f"A\t{log.request_key}\t{log.ts!r}\t{log.action}"

    def format_example(self, example: JoinedExample) -> str:
        return f"E\t{example.ts!r}\t{example.label}\t{self.format_features(example.features)}"

    def format(self, record: Record) -> str:
        if isinstance(record, FeatureLog):
            return self.format_feature(record)
        if isinstance(record, ActionLog):
            return self.format_action(record)
        return self.format_example(record)

    def format_features(self, features: Tuple[FeatureKey, ...]) -> str:
        return ",".join(f"{key.table_id}:{key.id}" for key in features)

    def parse_features(self, text: str) -> Tuple[FeatureKey, ...]:
        if not text:
            return ()
        keys = []
        for token in text.split(","):
            slot, sep, key_id = token.partition(":")
            if not sep:
                raise ValueError(f"feature {token!r} is not slot:id")
            keys.append(FeatureKey(int(slot), int(key_id)))
        return tuple(keys)

    def parse(self, line: str) -> Record:
        fields = line.rstrip("\n").split("\t")
        try:
            match fields[0]:
                case "F" if len(fields) == 4:
                    return FeatureLog(int(fields[1]), self.parse_features(fields[3]), float(fields[2]))
                case "A" if len(fields) == 4:
                    return ActionLog(int(fields[1]), fields[3], float(fields[2]))
                case "E" if len(fields) == 4:
                    return JoinedExample(self.parse_features(fields[3]), int(fields[2]), float(fields[1]))
        except (ValueError, AssertionError) as e:
            raise MalformedRecord(line, str(e)) from e
        raise MalformedRecord(line, "unknown record type or wrong field count")

    def read(self, path: str | Path) -> Iterator[Record]:
        with open(path, "rt", encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    yield self.parse(line)

    def write(self, path: str | Path, records) -> int:
        count = 0
        with open(path, "wt", encoding="utf-8") as f:
            for record in records:
                f.write(self.format(record) + "\n")
                count += 1
        return count
