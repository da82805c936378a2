"""Dataset records and their JSON Lines carrier format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from ..core import EntityPair, TaggedPair, Token, token_texts
from ..errors import SchemaError

SPLITS = (
    "train",
    "val_unknown_entities",
    "val_unknown_templates",
    "val_unknown_both",
    "val_ood",
    "test_unknown_entities",
    "test_unknown_templates",
    "test_unknown_both",
    "test_ood",
)


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    split: str
    tagged: TaggedPair
    gold_corrected: tuple[Token, ...]
    gold_pairs: tuple[EntityPair, ...]
    meta: dict = field(default_factory=dict)

    def to_json(self) -> str:
        obj = {
            "id": self.id,
            "split": self.split,
            "request_tokens": token_texts(list(self.tagged.request_tokens)),
            "correction_tokens": token_texts(list(self.tagged.correction_tokens)),
            "labels": list(self.tagged.labels),
            "boundary": self.tagged.boundary,
            "corrected_tokens": token_texts(list(self.gold_corrected)),
            "pairs": [
                {
                    "slot": p.slot_index,
                    "reparandum": token_texts(list(p.reparandum)),
                    "repair": token_texts(list(p.repair)),
                }
                for p in self.gold_pairs
            ],
            "meta": self.meta,
        }
        return json.dumps(obj, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "DatasetRecord":
        obj = json.loads(line)
        try:
            tagged = TaggedPair.from_texts(
                obj["request_tokens"], obj["correction_tokens"], obj["labels"]
            )
            if obj["boundary"] != tagged.boundary:
                raise SchemaError(
                    f"record {obj.get('id')}: boundary field disagrees with tokens"
                )
            corrected = tuple(
                Token(t, i) for i, t in enumerate(obj["corrected_tokens"])
            )
            pairs = tuple(
                EntityPair(
                    p["slot"],
                    tuple(Token(t, i) for i, t in enumerate(p["reparandum"])),
                    tuple(Token(t, i) for i, t in enumerate(p["repair"])),
                )
                for p in obj["pairs"]
            )
            return cls(
                obj["id"], obj["split"], tagged, corrected, pairs, obj.get("meta", {})
            )
        except KeyError as e:
            raise SchemaError(f"record missing field {e}") from None


def write_jsonl(records: Iterable[DatasetRecord], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(rec.to_json())
            f.write("\n")
            n += 1
    return n


def read_jsonl(path: str | Path) -> Iterator[DatasetRecord]:
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield DatasetRecord.from_json(line)
