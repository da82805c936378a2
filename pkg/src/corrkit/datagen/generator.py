"""Deterministic template-driven synthesis of labeled correction records.

Split construction crosses template tiers with entity tiers:

  train              train templates x train entities
  unknown_entities   train templates x unknown entities
  unknown_templates  unknown templates x train entities
  unknown_both       unknown templates x unknown entities
  ood                out-of-domain templates x ood entities (buy/attach tasks)

Sampling is uniform without replacement over an enumerated index space via
a lazily streamed Fisher-Yates shuffle, so a fixed seed gives byte-identical
output.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from ..core import TaggedPair, token_texts
from ..errors import (
    EmptyEntity,
    InsufficientCombinations,
    SchemaError,
    SlotMismatch,
)
from ..merging import merge
from .records import DatasetRecord
from .templates import Lexicon, Template, merge_lexicons, parse_lexicon_file, parse_template_file

# (condition name, template tier, entity tier)
EVAL_CONDITIONS = (
    ("unknown_entities", "train", "unknown"),
    ("unknown_templates", "unknown", "train"),
    ("unknown_both", "unknown", "unknown"),
    ("ood", "ood", "ood"),
)


def default_data_dir() -> Path:
    """Directory of the templates/lexicons shipped with the package."""
    return Path(__file__).resolve().parent.parent / "data"


@dataclass(frozen=True)
class GenerationConfig:
    seed: int = 0
    train_size: int = 50_000
    val_sizes: tuple[int, int, int, int] = (100, 100, 100, 100)
    test_sizes: tuple[int, int, int, int] = (205, 606, 584, 332)
    templates_dir: Path = field(default_factory=lambda: default_data_dir() / "templates")
    lexicons_dir: Path = field(default_factory=lambda: default_data_dir() / "lexicons")
    dedup: bool = True

    def __post_init__(self):
        if self.train_size < 0 or min(self.val_sizes) < 0 or min(self.test_sizes) < 0:
            raise ValueError("split sizes must be >= 0")


def load_templates(templates_dir: str | Path) -> dict[str, list[Template]]:
    """Read <tier>.toml files (train/unknown/ood) from a directory."""
    templates_dir = Path(templates_dir)
    tiers: dict[str, list[Template]] = {}
    for path in sorted(templates_dir.glob("*.toml")):
        tier = path.stem
        if tier not in ("train", "unknown", "ood"):
            raise SchemaError(f"{path}: template file must be train/unknown/ood.toml")
        tiers[tier] = parse_template_file(path)
    if "train" not in tiers:
        raise SchemaError(f"{templates_dir}: no train.toml template file")
    return tiers


def load_lexicons(lexicons_dir: str | Path) -> Lexicon:
    paths = sorted(Path(lexicons_dir).glob("*.toml"))
    if not paths:
        raise SchemaError(f"{lexicons_dir}: no lexicon files")
    return merge_lexicons([parse_lexicon_file(p) for p in paths])


def instantiate(
    req_t: Template,
    corr_t: Template,
    bindings: dict[str, tuple[tuple[str, ...], tuple[str, ...] | None]],
) -> tuple[TaggedPair, dict]:
    """Fill both templates and derive gold labels mechanically.

    bindings: slot -> (original form, replacement form or None).  Every
    corrected slot needs a replacement; uncorrected slots ignore theirs.
    Returns the gold TaggedPair and the record meta dict.
    """
    missing = corr_t.corrected_slots - set(req_t.placeholders)
    if missing:
        raise SlotMismatch(
            f"correction {corr_t.id} corrects {sorted(missing)} "
            f"absent from request {req_t.id}"
        )
    for slot, (orig, repl) in bindings.items():
        if not orig or (repl is not None and not repl):
            raise EmptyEntity(f"empty entity bound to slot {slot!r}")

    # Slot numbering: first corrected slot in request order is 1.
    slot_no: dict[str, int] = {}
    for slot in req_t.placeholders:
        if slot in corr_t.corrected_slots:
            slot_no[slot] = len(slot_no) + 1

    request: list[str] = []
    labels: list[str] = []
    for tag, value in req_t.parts:
        if tag == "lit":
            request.append(value)
            labels.append("C")
        else:
            orig, _ = bindings[value]
            request.extend(orig)
            lab = f"R{slot_no[value]}" if value in slot_no else "C"
            labels.extend([lab] * len(orig))

    correction: list[str] = []
    for tag, value in corr_t.parts:
        if tag == "lit":
            correction.append(value)
            labels.append("D")
        else:
            _, repl = bindings[value]
            if repl is None:
                raise SlotMismatch(f"corrected slot {value!r} has no replacement")
            correction.extend(repl)
            labels.extend([f"S{slot_no[value]}"] * len(repl))

    tagged = TaggedPair.from_texts(request, correction, labels)
    meta = {
        "task": req_t.task,
        "request_template_id": req_t.id,
        "correction_template_id": corr_t.id,
        "bindings": {
            slot: {
                "original": list(orig),
                "replacement": list(repl) if repl is not None else None,
            }
            for slot, (orig, repl) in bindings.items()
        },
    }
    return tagged, meta


@dataclass(frozen=True)
class _Block:
    """One compatible (request, correction) template pair and its binding space."""

    req_t: Template
    corr_t: Template
    slots: tuple[str, ...]  # request placeholders in pattern order
    factors: tuple[int, ...]  # binding-space size per slot
    size: int  # product of factors

    def decode(self, index: int, lexicon: Lexicon, tier: str):
        bindings = {}
        for slot, factor in zip(reversed(self.slots), reversed(self.factors)):
            index, j = divmod(index, factor)
            pool = lexicon.forms(slot, tier)
            m = len(pool)
            if slot in self.corr_t.corrected_slots:
                orig_i, r = divmod(j, m - 1)
                repl_i = r if r < orig_i else r + 1
                bindings[slot] = (pool[orig_i], pool[repl_i])
            else:
                bindings[slot] = (pool[j], None)
        return bindings


def _build_blocks(
    req_templates: list[Template],
    corr_templates: list[Template],
    lexicon: Lexicon,
    tier: str,
) -> list[_Block]:
    blocks = []
    for req_t in req_templates:
        for corr_t in corr_templates:
            if corr_t.task != req_t.task:
                continue
            if not corr_t.corrected_slots <= set(req_t.placeholders):
                continue
            factors = []
            for slot in req_t.placeholders:
                m = len(lexicon.forms(slot, tier))
                if slot in corr_t.corrected_slots:
                    factors.append(m * (m - 1))
                else:
                    factors.append(m)
            size = 1
            for f in factors:
                size *= f
            if size > 0:
                blocks.append(
                    _Block(req_t, corr_t, req_t.placeholders, tuple(factors), size)
                )
    return blocks


def combination_count(
    req_templates: list[Template],
    corr_templates: list[Template],
    lexicon: Lexicon,
    tier: str,
) -> int:
    """Distinct (template pair, binding) combinations for one condition."""
    return sum(b.size for b in _build_blocks(req_templates, corr_templates, lexicon, tier))


def _shuffled_indices(n: int, rng: random.Random) -> Iterator[int]:
    """Stream a uniform permutation of range(n) with O(yielded) memory."""
    swapped: dict[int, int] = {}
    for i in range(n - 1, -1, -1):
        j = rng.randint(0, i)
        yield swapped.get(j, j)
        swapped[j] = swapped.pop(i, i)


def _sample_condition(
    condition: str,
    blocks: list[_Block],
    lexicon: Lexicon,
    tier: str,
    count: int,
    seed: int,
    dedup: bool,
) -> Iterator[tuple[TaggedPair, dict]]:
    if count == 0:
        return
    total = sum(b.size for b in blocks)
    if count > total:
        raise InsufficientCombinations(
            f"{condition}: requested {count}, only {total} combinations exist"
        )
    offsets = []
    acc = 0
    for b in blocks:
        acc += b.size
        offsets.append(acc)

    rng = random.Random(f"{seed}:{condition}")
    seen: set[tuple[str, str]] = set()
    emitted = 0
    for index in _shuffled_indices(total, rng):
        bi = bisect_right(offsets, index)
        block = blocks[bi]
        local = index - (offsets[bi] - block.size)
        bindings = block.decode(local, lexicon, tier)
        tagged, meta = instantiate(block.req_t, block.corr_t, bindings)
        if dedup:
            key = (
                " ".join(token_texts(list(tagged.request_tokens))),
                " ".join(token_texts(list(tagged.correction_tokens))),
            )
            if key in seen:
                continue
            seen.add(key)
        yield tagged, meta
        emitted += 1
        if emitted == count:
            return
    raise InsufficientCombinations(
        f"{condition}: requested {count}, only {emitted} distinct surface pairs"
    )


def generate(config: GenerationConfig) -> Iterator[DatasetRecord]:
    """Yield train records, then per-condition val and test records.

    Every yielded record is validator-clean and satisfies the merge
    round-trip by construction (gold targets come from merge itself).
    """
    tiers = load_templates(config.templates_dir)
    lexicon = load_lexicons(config.lexicons_dir)

    def records_for(condition, template_tier, entity_tier, counts_splits):
        templates = tiers.get(template_tier, [])
        reqs = [t for t in templates if t.kind == "request"]
        corrs = [t for t in templates if t.kind == "correction"]
        blocks = _build_blocks(reqs, corrs, lexicon, entity_tier)
        total_wanted = sum(c for c, _ in counts_splits)
        stream = _sample_condition(
            condition, blocks, lexicon, entity_tier,
            total_wanted, config.seed, config.dedup,
        )
        for count, split in counts_splits:
            for i in range(count):
                tagged, meta = next(stream)
                result = merge(tagged)
                yield DatasetRecord(
                    id=f"{split}-{i:06d}",
                    split=split,
                    tagged=tagged,
                    gold_corrected=result.corrected_tokens,
                    gold_pairs=result.pairs,
                    meta=meta,
                )

    yield from records_for("train", "train", "train", [(config.train_size, "train")])
    for idx, (condition, template_tier, entity_tier) in enumerate(EVAL_CONDITIONS):
        yield from records_for(
            condition,
            template_tier,
            entity_tier,
            [
                (config.val_sizes[idx], f"val_{condition}"),
                (config.test_sizes[idx], f"test_{condition}"),
            ],
        )


@dataclass(frozen=True)
class DisjointnessReport:
    ok: bool
    failures: tuple[str, ...]


def verify_disjointness(records: list[DatasetRecord]) -> DisjointnessReport:
    """Independent scan that the splits honor their generalization contracts.

    (a) unknown-entity splits share no bound entity surface with train;
    (b) unknown-template splits share no template id with train;
    (c) ood records use only the buy/attach tasks.
    """
    failures: list[str] = []

    def bound_entities(rec: DatasetRecord) -> set[tuple[str, ...]]:
        out = set()
        for binding in rec.meta.get("bindings", {}).values():
            out.add(tuple(binding["original"]))
            if binding["replacement"] is not None:
                out.add(tuple(binding["replacement"]))
        return out

    def template_ids(rec: DatasetRecord) -> set[str]:
        return {
            rec.meta.get("request_template_id"),
            rec.meta.get("correction_template_id"),
        }

    train = [r for r in records if r.split == "train"]
    train_entities = set().union(*(bound_entities(r) for r in train)) if train else set()
    train_templates = set().union(*(template_ids(r) for r in train)) if train else set()

    for rec in records:
        if rec.split.endswith("unknown_entities") or rec.split.endswith("unknown_both"):
            leaked = bound_entities(rec) & train_entities
            if leaked:
                forms = ", ".join(" ".join(e) for e in sorted(leaked))
                failures.append(f"{rec.id}: train entity in {rec.split}: {forms}")
        if rec.split.endswith("unknown_templates") or rec.split.endswith("unknown_both"):
            leaked_ids = template_ids(rec) & train_templates
            if leaked_ids:
                failures.append(
                    f"{rec.id}: train template in {rec.split}: {sorted(leaked_ids)}"
                )
        if rec.split.endswith("_ood"):
            if rec.meta.get("task") not in ("buy", "attach"):
                failures.append(f"{rec.id}: ood record with task {rec.meta.get('task')!r}")

    return DisjointnessReport(ok=not failures, failures=tuple(failures))
