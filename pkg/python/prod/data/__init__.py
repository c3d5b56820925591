from .training_example import TrainingExample
from .raw_rating import RawRating, RatingOutOfScale, binarize_label
from .data_file_missing import DataFileMissing
from .user_bucket_sample import UserBucketSample
from .movielens_load import MovieLensLoad
from .criteo_load import CriteoLoad
from .md5_reducer import Md5Reducer
from .collision_stats import CollisionStats, collision_rate, hash_collision_stats, expected_distinct, expected_distinct_std, shared_row_rate
from .split_shards import split_shards
from .drift_config import DriftConfig
from .synthetic_drift import SyntheticDrift
