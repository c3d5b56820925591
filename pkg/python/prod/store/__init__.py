from .feature_key import FeatureKey
from .embedding_entry import EmbeddingEntry
from .table_config import TableConfig
from .storage_exhausted import StorageExhausted
from .cuckoo_table import CuckooTable
from .embedding_table import EmbeddingTable, TableStats
from .decompose import decompose_id
