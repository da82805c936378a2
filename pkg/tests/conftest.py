import pytest

from corrkit.datagen import GenerationConfig, generate


@pytest.fixture(scope="session")
def default_dataset():
    """Small train split plus full-size val/test splits, generated once."""
    config = GenerationConfig(seed=7, train_size=5000)
    return list(generate(config))
