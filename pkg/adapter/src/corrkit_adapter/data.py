"""Reading the toolkit's JSONL interchange format.

Each line carries at least request_tokens, correction_tokens, labels
and boundary; the adapter needs nothing else, so records are kept as
plain tuples rather than pulling in the toolkit as a dependency.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import LABELS


@dataclass(frozen=True)
class Example:
    tokens: tuple[str, ...]
    boundary: int
    labels: tuple[str, ...]


def read_examples(path: str | Path) -> list[Example]:
    examples = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            tokens = tuple(obj["request_tokens"]) + tuple(obj["correction_tokens"])
            boundary = obj["boundary"]
            labels = tuple(obj["labels"])
            if len(labels) != len(tokens):
                raise ValueError(f"{path}:{lineno}: label/token length mismatch")
            if boundary != len(obj["request_tokens"]):
                raise ValueError(f"{path}:{lineno}: boundary mismatch")
            unknown = set(labels) - set(LABELS)
            if unknown:
                raise ValueError(f"{path}:{lineno}: unknown labels {sorted(unknown)}")
            examples.append(Example(tokens, boundary, labels))
    return examples
