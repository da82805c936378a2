"""Training, loading and prediction for the BERT token-classification tagger.

A checkpoint directory holds the usual transformers artifacts plus
adapter_config.json with the settings the wire protocol needs to
reproduce the training-time encoding (currently just the separator
choice).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import torch
from torch.utils.data import DataLoader
from transformers import (
    AutoModelForTokenClassification,
    AutoTokenizer,
)

from . import LABELS
from .data import Example
from .encoding import IGNORE, encode

ADAPTER_CONFIG = "adapter_config.json"


@dataclass(frozen=True)
class TrainSettings:
    epochs: int = 3
    lr: float = 2e-5
    seed: int = 0
    batch_size: int = 16
    use_separator: bool = True


@dataclass
class Tagger:
    tokenizer: object
    model: object
    use_separator: bool

    @torch.no_grad()
    def predict(self, tokens: list[str], boundary: int) -> list[str]:
        enc = encode(
            self.tokenizer, tokens, boundary, use_separator=self.use_separator
        )
        out = self.model(
            input_ids=torch.tensor([enc.input_ids]),
            token_type_ids=torch.tensor([enc.token_type_ids]),
        )
        best = out.logits[0].argmax(dim=-1)
        return [LABELS[best[pos].item()] for pos in enc.head_positions]


def _collate(batch, pad_id):
    width = max(len(enc.input_ids) for enc in batch)

    def pad(rows, fill):
        return torch.tensor([row + [fill] * (width - len(row)) for row in rows])

    return {
        "input_ids": pad([e.input_ids for e in batch], pad_id),
        "token_type_ids": pad([e.token_type_ids for e in batch], 0),
        "attention_mask": pad([[1] * len(e.input_ids) for e in batch], 0),
        "labels": pad([e.label_ids for e in batch], IGNORE),
    }


def train(
    examples: list[Example],
    base: str,
    out_dir: str | Path,
    settings: TrainSettings = TrainSettings(),
    log=print,
) -> Tagger:
    if not examples:
        raise ValueError("no training examples")
    random.seed(settings.seed)
    torch.manual_seed(settings.seed)

    tokenizer = AutoTokenizer.from_pretrained(base)
    model = AutoModelForTokenClassification.from_pretrained(
        base,
        num_labels=len(LABELS),
        id2label=dict(enumerate(LABELS)),
        label2id={lab: i for i, lab in enumerate(LABELS)},
    )
    encoded = [
        encode(
            tokenizer,
            list(ex.tokens),
            ex.boundary,
            list(ex.labels),
            use_separator=settings.use_separator,
        )
        for ex in examples
    ]
    loader = DataLoader(
        encoded,
        batch_size=settings.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(settings.seed),
        collate_fn=lambda batch: _collate(batch, tokenizer.pad_token_id),
    )
    optimizer = torch.optim.AdamW(model.parameters(), lr=settings.lr)

    model.train()
    for epoch in range(settings.epochs):
        total = 0.0
        for batch in loader:
            optimizer.zero_grad()
            loss = model(**batch).loss
            loss.backward()
            optimizer.step()
            total += loss.item()
        log(f"epoch {epoch + 1}/{settings.epochs}: loss {total / len(loader):.4f}")
    model.eval()

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    with open(out_dir / ADAPTER_CONFIG, "w", encoding="utf-8") as f:
        json.dump(
            {
                "use_separator": settings.use_separator,
                "base": str(base),
                "epochs": settings.epochs,
                "lr": settings.lr,
                "seed": settings.seed,
            },
            f,
            indent=2,
        )
        f.write("\n")
    return Tagger(tokenizer, model, settings.use_separator)


def load(checkpoint: str | Path) -> Tagger:
    checkpoint = Path(checkpoint)
    with open(checkpoint / ADAPTER_CONFIG, encoding="utf-8") as f:
        config = json.load(f)
    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    model = AutoModelForTokenClassification.from_pretrained(checkpoint)
    model.eval()
    return Tagger(tokenizer, model, config["use_separator"])
