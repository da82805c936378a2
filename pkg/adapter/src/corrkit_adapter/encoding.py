"""Subword encoding with first-subword label alignment.

Each input word contributes one or more wordpieces; only the first
piece carries the word's label, the rest are masked out of the loss
with -100. Request and correction become segments 0 and 1, optionally
divided by the tokenizer's separator token.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import LABELS

LABEL_TO_ID = {lab: i for i, lab in enumerate(LABELS)}
IGNORE = -100


@dataclass(frozen=True)
class Encoded:
    input_ids: list[int]
    token_type_ids: list[int]
    label_ids: list[int]
    head_positions: list[int]


def encode(
    tokenizer,
    tokens: list[str],
    boundary: int,
    labels: list[str] | None = None,
    use_separator: bool = True,
) -> Encoded:
    """Encode one example; head_positions[i] locates word i's first piece."""
    if not 0 < boundary <= len(tokens):
        raise ValueError("boundary out of range")
    if labels is not None and len(labels) != len(tokens):
        raise ValueError("label/token length mismatch")

    cls_id = tokenizer.cls_token_id
    sep_id = tokenizer.sep_token_id
    input_ids = [cls_id]
    type_ids = [0]
    label_ids = [IGNORE]
    heads: list[int] = []

    for i, word in enumerate(tokens):
        if use_separator and i == boundary:
            input_ids.append(sep_id)
            type_ids.append(1)
            label_ids.append(IGNORE)
        segment = 0 if i < boundary else 1
        pieces = tokenizer.tokenize(word) or [tokenizer.unk_token]
        piece_ids = tokenizer.convert_tokens_to_ids(pieces)
        heads.append(len(input_ids))
        for j, pid in enumerate(piece_ids):
            input_ids.append(pid)
            type_ids.append(segment)
            if labels is not None and j == 0:
                label_ids.append(LABEL_TO_ID[labels[i]])
            else:
                label_ids.append(IGNORE)

    input_ids.append(sep_id)
    type_ids.append(1 if boundary < len(tokens) else 0)
    label_ids.append(IGNORE)
    return Encoded(input_ids, type_ids, label_ids, heads)
