from pathlib import Path

import numpy as np
import pytest

from cuckoorec import DeepFMConfig, PSCluster, SeedExpander, TableConfig
from cuckoorec.data.training_example import TrainingExample
from cuckoorec.store.feature_key import FeatureKey

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def seeds() -> SeedExpander:
    return SeedExpander(7)


@pytest.fixture
def model_config() -> DeepFMConfig:
    return DeepFMConfig(num_slots=2, dim=4, mlp_layers=(8, 1))


@pytest.fixture
def make_cluster(model_config, seeds):
    """Factory of small clusters, keyword arguments go to PSCluster."""

    def make(num_shards: int = 2, **kwargs) -> PSCluster:
        template = kwargs.pop("table_template", TableConfig(dim=model_config.dim, initial_capacity=16))
        return PSCluster(num_shards, template, kwargs.pop("model_config", model_config), seeds, **kwargs)

    return make


def separable_examples(n: int, rng: np.random.Generator, num_ids: int = 20) -> list:
    """Two-slot examples whose label is decided by the slot 0 id's parity."""
    examples = []
    for i in range(n):
        a = int(rng.integers(0, num_ids))
        b = int(rng.integers(0, 5))
        examples.append(TrainingExample((FeatureKey(0, a), FeatureKey(1, b)), a % 2, float(i)))
    return examples
