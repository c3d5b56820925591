"""Plain-text descriptor of one shard snapshot.

::

    shard = 3
    version = 120
    timestamp = 1700000000.25
    file = shard.json 412 9f0c2a61d35e7b08
    file = table_0.bin 81944 03ab77e10c4f29d6

Checksums are xxh64 digests of the file bytes in hex.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List

import xxhash

from .recovery_error import RecoveryError

MANIFEST_NAME = "manifest"


def checksum(data: bytes) -> int:
    return xxhash.xxh64_intdigest(data)


@dataclass(frozen=True)
class ManifestFile:

    name: str

    #: Size in bytes
    length: int

    #: xxh64 of the content
    checksum: int


@dataclass
class SnapshotManifest:

    shard: int

    version: int

    #: Wall-clock time the snapshot was taken at
    timestamp: float

    files: List[ManifestFile] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"shard = {self.shard}", f"version = {self.version}", f"timestamp = {self.timestamp!r}"]
        for f in self.files:
            lines.append(f"file = {f.name} {f.length} {f.checksum:016x}")
        return "\n".join(lines) + "\n"

    def write(self, directory: str | Path) -> Path:
        path = Path(directory) / MANIFEST_NAME
        path.write_text(self.to_text(), encoding="utf-8")
        return path

    @staticmethod
    def from_text(text: str, source: str = MANIFEST_NAME) -> "SnapshotManifest":
        values = {}
        files = []
        for n, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise RecoveryError(source, f"line {n} is not key = value")
            key, value = key.strip(), value.strip()
            if key == "file":
                parts = value.split()
                if len(parts) != 3:
                    raise RecoveryError(source, f"line {n} needs name, length and checksum")
                files.append(ManifestFile(parts[0], int(parts[1]), int(parts[2], 16)))
            else:
                values[key] = value
        try:
            return SnapshotManifest(int(values["shard"]), int(values["version"]), float(values["timestamp"]), files)
        except KeyError as e:
            raise RecoveryError(source, f"missing field {e.args[0]}") from e

    @staticmethod
    def read(path: str | Path) -> "SnapshotManifest":
        """
        :param path:
            The manifest file or the snapshot directory holding it
        """
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        if not path.exists():
            raise RecoveryError(str(path), "manifest not found")
        return SnapshotManifest.from_text(path.read_text(encoding="utf-8"), str(path))
