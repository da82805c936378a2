"""Comparison of the fine-tuned adapter against published reference accuracy.

Reference dual-target exact-match per condition (test splits):
unknown entities 98.54, unknown templates 97.03, unknown both 90.24,
out-of-domain 88.55. The tolerance is +/- 5 percentage points; larger
deviations are reported rather than failed, since the published
dataset itself is unavailable and our regenerated splits differ in
templates and vocabulary.

The whole module is skipped when the pretrained cased base cannot be
fetched (offline environments), because the reference numbers are only
meaningful for a pretrained encoder.
"""

import sys

import pytest

from corrkit.datagen import GenerationConfig, generate, write_jsonl
from corrkit.evaluation import evaluate
from corrkit.tagger import repair_labels  # noqa: F401  (lenient path sanity)

from corrkit_adapter.data import read_examples
from corrkit_adapter.model import TrainSettings, train

BASE = "bert-base-cased"
REFERENCE = {
    "test_unknown_entities": 98.54,
    "test_unknown_templates": 97.03,
    "test_unknown_both": 90.24,
    "test_ood": 88.55,
}
TOLERANCE_PP = 5.0


def _base_available() -> bool:
    try:
        from transformers import AutoTokenizer

        AutoTokenizer.from_pretrained(BASE)
        return True
    except OSError:
        return False


pytestmark = pytest.mark.skipif(
    not _base_available(),
    reason=f"pretrained base {BASE!r} not reachable; comparison needs it",
)


def test_table_comparison(tmp_path):
    records = list(generate(GenerationConfig(seed=0)))
    train_path = tmp_path / "train.jsonl"
    write_jsonl([r for r in records if r.split == "train"], train_path)

    tagger = train(
        read_examples(train_path),
        BASE,
        tmp_path / "ckpt",
        TrainSettings(epochs=3, lr=2e-5, seed=0),
        log=lambda msg: print(msg, file=sys.stderr),
    )

    deviations = []
    for split, reference in REFERENCE.items():
        subset = [r for r in records if r.split == split]
        outcome = evaluate(
            subset,
            lambda tokens, boundary: tagger.predict(tokens, boundary),
            lenient_repair=True,
        ).overall
        accuracy = 100.0 * outcome.dual / outcome.n
        line = f"{split}: {accuracy:.2f} % (reference {reference:.2f} %)"
        print(line)
        if abs(accuracy - reference) > TOLERANCE_PP:
            deviations.append(line)

    if deviations:
        # reported, not failed: the regenerated dataset is not the
        # published one, so differences beyond tolerance carry a caveat
        print("deviations beyond tolerance (dataset-difference caveat):")
        for line in deviations:
            print(f"  {line}")
