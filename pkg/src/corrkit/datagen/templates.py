"""Template and lexicon files: TOML schema, parsing, and invariants."""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ParseError, SchemaError

TASKS = ("bring", "cook", "buy", "attach")

# Which slots belong to which task.
SLOT_TASK = {
    "object": "bring",
    "location": "bring",
    "recipe": "cook",
    "product": "buy",
    "attach_object": "attach",
    "attach_location": "attach",
}
SLOT_NAMES = tuple(SLOT_TASK)

TIERS = ("train", "unknown", "ood")

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")


@dataclass(frozen=True)
class Template:
    """One utterance pattern; literals are pre-tokenized lowercase words."""

    id: str
    kind: str  # request | correction
    task: str
    # parts: ("lit", word) or ("slot", slot_name), in pattern order
    parts: tuple[tuple[str, str], ...]
    corrected_slots: frozenset[str]

    @property
    def placeholders(self) -> tuple[str, ...]:
        return tuple(name for tag, name in self.parts if tag == "slot")

    @property
    def interregnum_tokens(self) -> tuple[str, ...]:
        """Literal tokens of a correction pattern; they carry the D label."""
        return tuple(word for tag, word in self.parts if tag == "lit")


def _parse_pattern(pattern: str, tid: str) -> tuple[tuple[str, str], ...]:
    parts: list[tuple[str, str]] = []
    for word in pattern.split():
        m = _PLACEHOLDER_RE.fullmatch(word)
        if m:
            slot = m.group(1)
            if slot not in SLOT_TASK:
                raise SchemaError(f"template {tid}: unknown slot {slot!r}")
            parts.append(("slot", slot))
        elif "{" in word or "}" in word:
            raise SchemaError(f"template {tid}: malformed placeholder {word!r}")
        else:
            parts.append(("lit", word.lower()))
    if not parts:
        raise SchemaError(f"template {tid}: empty pattern")
    return tuple(parts)


def _build_template(entry: dict, path: Path) -> Template:
    try:
        tid = entry["id"]
        kind = entry["kind"]
        task = entry["task"]
        pattern = entry["pattern"]
    except KeyError as e:
        raise SchemaError(f"{path}: template missing field {e}") from None
    if kind not in ("request", "correction"):
        raise SchemaError(f"template {tid}: bad kind {kind!r}")
    if task not in TASKS:
        raise SchemaError(f"template {tid}: bad task {task!r}")

    parts = _parse_pattern(pattern, tid)
    placeholders = [name for tag, name in parts if tag == "slot"]
    if len(set(placeholders)) != len(placeholders):
        raise SchemaError(f"template {tid}: repeated placeholder")
    for slot in placeholders:
        if SLOT_TASK[slot] != task:
            raise SchemaError(
                f"template {tid}: slot {slot!r} does not belong to task {task!r}"
            )

    corrected = frozenset(entry.get("corrected_slots", []))
    if kind == "request":
        if corrected:
            raise SchemaError(f"template {tid}: request with corrected_slots")
        if not placeholders:
            raise SchemaError(f"template {tid}: request without placeholders")
    else:
        if not 1 <= len(corrected) <= 2:
            raise SchemaError(
                f"template {tid}: correction must correct 1 or 2 slots"
            )
        if corrected != set(placeholders):
            raise SchemaError(
                f"template {tid}: placeholders must equal corrected_slots"
            )
    return Template(tid, kind, task, parts, corrected)


def parse_template_file(path: str | Path) -> list[Template]:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            doc = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"{path}: {e}") from e
    templates = [_build_template(entry, path) for entry in doc.get("template", [])]
    seen: set[str] = set()
    for t in templates:
        if t.id in seen:
            raise SchemaError(f"{path}: duplicate template id {t.id!r}")
        seen.add(t.id)
    return templates


@dataclass(frozen=True)
class Lexicon:
    """Per slot, the entity surface forms of each tier (train/unknown/ood).

    Surface forms are token tuples; train and unknown tiers of a slot are
    disjoint so the unknown-entity splits cannot leak training entities.
    """

    entries: dict[str, dict[str, tuple[tuple[str, ...], ...]]]

    def forms(self, slot: str, tier: str) -> tuple[tuple[str, ...], ...]:
        return self.entries.get(slot, {}).get(tier, ())


def parse_lexicon_file(path: str | Path) -> Lexicon:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            doc = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"{path}: {e}") from e

    entries: dict[str, dict[str, list[tuple[str, ...]]]] = {}
    for entry in doc.get("lexicon", []):
        try:
            slot = entry["slot"]
            tier = entry["tier"]
            forms = entry["entries"]
        except KeyError as e:
            raise SchemaError(f"{path}: lexicon missing field {e}") from None
        if slot not in SLOT_TASK:
            raise SchemaError(f"{path}: unknown slot {slot!r}")
        if tier not in TIERS:
            raise SchemaError(f"{path}: unknown tier {tier!r}")
        bucket = entries.setdefault(slot, {}).setdefault(tier, [])
        for form in forms:
            tokens = tuple(form.lower().split())
            if not tokens:
                raise SchemaError(f"{path}: empty entity for slot {slot!r}")
            bucket.append(tokens)

    frozen = {
        slot: {tier: tuple(forms) for tier, forms in tiers.items()}
        for slot, tiers in entries.items()
    }
    lex = Lexicon(frozen)
    for slot, tiers in frozen.items():
        overlap = set(tiers.get("train", ())) & set(tiers.get("unknown", ()))
        if overlap:
            raise SchemaError(
                f"{path}: slot {slot!r} train/unknown tiers overlap: {overlap}"
            )
        for tier, forms in tiers.items():
            if len(set(forms)) != len(forms):
                raise SchemaError(f"{path}: slot {slot!r} tier {tier!r} has duplicates")
    return lex


def merge_lexicons(lexicons: list[Lexicon]) -> Lexicon:
    merged: dict[str, dict[str, list[tuple[str, ...]]]] = {}
    for lex in lexicons:
        for slot, tiers in lex.entries.items():
            for tier, forms in tiers.items():
                merged.setdefault(slot, {}).setdefault(tier, []).extend(forms)
    frozen = {
        slot: {tier: tuple(forms) for tier, forms in tiers.items()}
        for slot, tiers in merged.items()
    }
    return Lexicon(frozen)
