import json
import logging
import re
import shutil
import time
from pathlib import Path
from typing import Optional, Tuple

from ..model.tools.dense_codec import DenseCodec
from ..store.tools.table_codec import TableCodec
from .ps_shard import PSShard
from .snapshot_aborted import SnapshotAborted
from .snapshot_manifest import MANIFEST_NAME, ManifestFile, SnapshotManifest, checksum

logger = logging.getLogger(__name__)

SHARD_FILE = "shard.json"
DENSE_FILE = "dense.bin"
VERSION_DIR = re.compile(r"^v(\d+)$")


def shard_directory(root: str | Path, shard: int) -> Path:
    return Path(root) / f"shard_{shard}"


def table_file(table_id: int) -> str:
    return f"table_{table_id}.bin"


class Snapshot:

    """Write a durable copy of one shard.

    Files land in ``<root>/shard_<i>/v<version>/``: a `shard.json`
    sidecar, one binary file per table, `dense.bin` when the shard holds
    the dense block, and the manifest. Everything is written into a
    temporary directory first and renamed at the end, so a failed write
    never shadows the previous snapshot.

    Tables are copied one at a time under their writer lock. With `keep`
    above zero only the newest `keep` complete versions of the shard are
    kept on disk.
    """

    def __init__(self, keep: int = 0):
        assert keep >= 0, f"keep must be >= 0, got {keep}"
        self.__keep = keep

    def apply(self, shard: PSShard, root: str | Path, timestamp: Optional[float] = None) -> SnapshotManifest:
        version = shard.get_version()
        parent = shard_directory(root, shard.get_index())
        final = parent / f"v{version}"
        staging = parent / f".v{version}.tmp"
        try:
            parent.mkdir(parents=True, exist_ok=True)
            if staging.exists():
                shutil.rmtree(staging)
            staging.mkdir()

            manifest = SnapshotManifest(shard.get_index(), version, timestamp if timestamp is not None else time.time())
            manifest.files.append(self.__write(staging / SHARD_FILE, self.__describe(shard)))
            codec = TableCodec()
            for table in shard.tables():
                manifest.files.append(self.__write(staging / table_file(table.get_table_id()), codec.encode(table)))
            dense = self.dense_arrays(shard)
            if dense is not None:
                manifest.files.append(self.__write(staging / DENSE_FILE, DenseCodec().encode(dense)))
            manifest.write(staging)

            if final.exists():
                shutil.rmtree(final)
            staging.rename(final)
        except OSError as e:
            shutil.rmtree(staging, ignore_errors=True)
            raise SnapshotAborted(shard.get_index(), version, e) from e

        self.prune(parent)

        logger.info("Snapshot of shard %d at v%d: %d files in %s", shard.get_index(), version, len(manifest.files), final)
        return manifest

    def dense_arrays(self, shard: PSShard) -> Optional[dict]:
        dense = shard.get_dense()
        if dense is None:
            return None
        arrays = dict(dense.named_arrays())
        optimizer = shard.get_optimizer()
        if optimizer is not None:
            arrays.update(optimizer.state_arrays())
        return arrays

    def versions(self, parent: Path) -> list[Tuple[int, Path]]:
        """Complete version directories under `parent`, oldest first."""
        if not parent.is_dir():
            return []
        found = []
        for child in parent.iterdir():
            match = VERSION_DIR.match(child.name)
            if match and (child / MANIFEST_NAME).exists():
                found.append((int(match.group(1)), child))
        return sorted(found)

    def prune(self, parent: Path) -> int:
        """Delete all but the newest `keep` versions, returns how many went."""
        if self.__keep == 0:
            return 0
        stale = self.versions(parent)[:-self.__keep]
        for _, path in stale:
            shutil.rmtree(path, ignore_errors=True)
        if stale:
            logger.debug("Pruned %d old snapshots in %s", len(stale), parent)
        return len(stale)

    def latest(self, root: str | Path, shard: int) -> Optional[Path]:
        """Newest complete snapshot directory of `shard`, if any."""
        found = self.versions(shard_directory(root, shard))
        return found[-1][1] if found else None

    def __describe(self, shard: PSShard) -> bytes:
        payload = {
            "index": shard.get_index(),
            "role": shard.get_role(),
            "version": shard.get_version(),
            "last_applied": {str(k): v for k, v in sorted(shard.get_last_applied_map().items())},
            "tables": {str(t.get_table_id()): t.get_config().to_dict() for t in shard.tables()},
            "rng": {str(t.get_table_id()): t.get_rng_state() for t in shard.tables()},
        }
        return json.dumps(payload, sort_keys=True, indent=1).encode("utf-8")

    def __write(self, path: Path, data: bytes) -> ManifestFile:
        path.write_bytes(data)
        return ManifestFile(path.name, len(data), checksum(data))
