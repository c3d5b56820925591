import json
import logging
from pathlib import Path
from typing import Optional

from ..model.adam_optimizer import AdamOptimizer
from ..model.dense_params import DenseParams
from ..model.tools.dense_codec import CorruptDenseData, DenseCodec
from ..store.feature_key import FeatureKey
from ..store.table_config import TableConfig
from ..store.tools.table_codec import CorruptTableData, TableCodec
from ..utils.seeding import SeedExpander
from .ps_shard import PSShard
from .recovery_error import RecoveryError
from .snapshot import DENSE_FILE, SHARD_FILE, table_file
from .snapshot_manifest import SnapshotManifest, checksum

logger = logging.getLogger(__name__)


class Restore:

    """Rebuild a shard from a snapshot.

    Every file listed in the manifest is checked for presence, length and
    checksum before any state is built.
    """

    def apply(self, manifest_path: str | Path, seeds: Optional[SeedExpander] = None) -> PSShard:
        """
        :param manifest_path:
            Manifest file or snapshot directory

        :raise RecoveryError:
            Missing file, checksum mismatch or undecodable content
        """
        manifest_path = Path(manifest_path)
        directory = manifest_path if manifest_path.is_dir() else manifest_path.parent
        manifest = SnapshotManifest.read(manifest_path)
        blobs = {f.name: self.__load(directory / f.name, f.length, f.checksum) for f in manifest.files}

        if SHARD_FILE not in blobs:
            raise RecoveryError(str(directory / SHARD_FILE), "not listed in manifest")
        meta = json.loads(blobs[SHARD_FILE].decode("utf-8"))
        if meta["version"] != manifest.version or meta["index"] != manifest.shard:
            raise RecoveryError(str(directory / SHARD_FILE), "does not match the manifest")

        shard = PSShard(meta["index"], meta["role"], seeds=seeds)
        codec = TableCodec()
        for table_id_text, config_payload in sorted(meta["tables"].items(), key=lambda kv: int(kv[0])):
            table_id = int(table_id_text)
            config = TableConfig.from_dict(config_payload)
            name = table_file(table_id)
            if name not in blobs:
                raise RecoveryError(str(directory / name), "not listed in manifest")
            table = shard.create_table(table_id, config)
            if table_id_text in meta.get("rng", {}):
                table.set_rng_state(meta["rng"][table_id_text])
            try:
                header = codec.read_header(blobs[name])
                if header.table_id != table_id or header.config_digest != config.digest():
                    raise RecoveryError(str(directory / name), "header does not match the table configuration")
                for key, entry in codec.records(blobs[name]):
                    table.insert(FeatureKey(table_id, key), entry)
            except CorruptTableData as e:
                raise RecoveryError(str(directory / name), str(e)) from e

        if DENSE_FILE in blobs:
            try:
                arrays = DenseCodec().decode(blobs[DENSE_FILE])
            except CorruptDenseData as e:
                raise RecoveryError(str(directory / DENSE_FILE), str(e)) from e
            shard.set_dense(DenseParams.from_named_arrays({n: a for n, a in arrays.items() if not n.startswith("adam.")}))
            if "adam.t" in arrays:
                optimizer = AdamOptimizer()
                optimizer.load_state_arrays(arrays)
                shard.set_optimizer(optimizer)

        for source, version in meta["last_applied"].items():
            shard.set_last_applied(int(source), version)
        shard.set_version(manifest.version)
        logger.info("Restored shard %d at v%d with %d keys", shard.get_index(), manifest.version, shard.num_keys())
        return shard

    def __load(self, path: Path, length: int, expected: int) -> bytes:
        if not path.exists():
            raise RecoveryError(str(path), "file missing")
        data = path.read_bytes()
        if len(data) != length:
            raise RecoveryError(str(path), f"length {len(data)} differs from manifest length {length}")
        if checksum(data) != expected:
            raise RecoveryError(str(path), "checksum mismatch")
        return data
