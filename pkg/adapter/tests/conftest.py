import sys

import pytest

from corrkit.datagen import GenerationConfig, generate, write_jsonl

from corrkit_adapter.data import read_examples
from corrkit_adapter.init_base import build_base
from corrkit_adapter.model import TrainSettings, train


@pytest.fixture(scope="session")
def workspace(tmp_path_factory):
    """Tiny dataset, offline base model, and a trained checkpoint."""
    root = tmp_path_factory.mktemp("adapter")
    records = list(
        generate(
            GenerationConfig(
                seed=13,
                train_size=150,
                val_sizes=(0, 0, 0, 0),
                test_sizes=(10, 0, 0, 0),
            )
        )
    )
    data = root / "train.jsonl"
    write_jsonl([r for r in records if r.split == "train"], data)
    test_data = root / "test.jsonl"
    write_jsonl([r for r in records if r.split != "train"], test_data)

    base = build_base(data, root / "base", hidden_size=64, num_layers=2)
    checkpoint = root / "ckpt"
    train(
        read_examples(data),
        str(base),
        checkpoint,
        TrainSettings(epochs=10, lr=1e-3, seed=0, batch_size=32),
        log=lambda msg: print(msg, file=sys.stderr),
    )
    return {
        "data": data,
        "test_data": test_data,
        "base": base,
        "checkpoint": checkpoint,
    }
