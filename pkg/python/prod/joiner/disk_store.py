"""Append-only on-disk store for features waiting for their action.

Each record is a 4-byte big-endian length followed by a JSON body. An
in-memory index maps request keys to the byte offset of their newest
record; deletions only touch the index, :py:meth:`DiskStore.compact`
rewrites the file with the live records.
"""

import json
import logging
import os
import struct
import threading
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..store.feature_key import FeatureKey
from .feature_log import FeatureLog

logger = logging.getLogger(__name__)

LENGTH = struct.Struct(">I")


class DiskStore:

    def __init__(self, path: str | Path):
        """
        :param path:
            Log file, truncated on open; pending joins do not survive a restart
        """
        self.__path = Path(path)
        self.__path.parent.mkdir(parents=True, exist_ok=True)
        self.__file = open(self.__path, "w+b")
        self.__index: Dict[int, Tuple[int, float]] = {}
        self.__records = 0
        self.__lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.__index)

    def __contains__(self, request_key: int) -> bool:
        return request_key in self.__index

    def __repr__(self):
        return f"<DiskStore {self.__path}, {len(self)} live of {self.__records} records>"

    def get_path(self) -> Path:
        return self.__path

    def dead_records(self) -> int:
        return self.__records - len(self.__index)

    def dead_fraction(self) -> float:
        if self.__records == 0:
            return 0.0
        return 1.0 - len(self.__index) / self.__records

    def put(self, log: FeatureLog) -> int:
        """Append `log`, shadowing any older record of its request key.

        :return:
            Byte offset of the record
        """
        body = json.dumps({
            "request_key": log.request_key,
            "ts": log.ts,
            "features": [[key.table_id, key.id] for key in log.features],
        }).encode("utf-8")
        with self.__lock:
            self.__file.seek(0, os.SEEK_END)
            offset = self.__file.tell()
            self.__file.write(LENGTH.pack(len(body)))
            self.__file.write(body)
            self.__index[log.request_key] = (offset, log.ts)
            self.__records += 1
        return offset

    def get(self, request_key: int) -> Optional[FeatureLog]:
        with self.__lock:
            found = self.__index.get(request_key)
            if found is None:
                return None
            return self.__read(found[0])

    def pop(self, request_key: int) -> Optional[FeatureLog]:
        log = self.get(request_key)
        if log is not None:
            self.delete(request_key)
        return log

    def delete(self, request_key: int) -> bool:
        with self.__lock:
            return self.__index.pop(request_key, None) is not None

    def older_than(self, cutoff: float) -> List[int]:
        """Request keys whose features are strictly older than `cutoff`, oldest first."""
        with self.__lock:
            found = [(ts, key) for key, (_, ts) in self.__index.items() if ts < cutoff]
        return [key for _, key in sorted(found)]

    def compact(self) -> int:
        """Rewrite the log with live records only.

        :return:
            Records dropped
        """
        with self.__lock:
            live = [self.__read(offset) for offset, _ in sorted(self.__index.values())]
            dropped = self.__records - len(live)
            self.__file.close()
            self.__file = open(self.__path, "w+b")
            self.__index = {}
            self.__records = 0
        for log in live:
            self.put(log)
        logger.debug("Compacted %s, dropped %d dead records", self.__path, dropped)
        return dropped

    def close(self):
        self.__file.close()

    def __read(self, offset: int) -> FeatureLog:
        self.__file.seek(offset)
        (length,) = LENGTH.unpack(self.__file.read(LENGTH.size))
        body = json.loads(self.__file.read(length).decode("utf-8"))
        features = tuple(FeatureKey(table_id, key_id) for table_id, key_id in body["features"])
        return FeatureLog(body["request_key"], features, body["ts"])
