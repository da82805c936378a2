"""Dual-target exact-match accuracy per split plus table/JSON reporting.

A record counts as correct only when both the corrected request and the
full set of (reparandum, repair) pairs match the references exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .core import TaggedPair, token_texts, validate
from .merging import merge
from .tagger import repair_labels

LabelSource = Callable[[list[str], int], list[str]]

# (report row, split suffix) in table order
ROW_ORDER = (
    ("unknown entities", "unknown_entities"),
    ("unknown templates", "unknown_templates"),
    ("unknown entities and templates", "unknown_both"),
    ("out-of-domain entities and templates", "ood"),
)


@dataclass(frozen=True)
class RecordOutcome:
    id: str
    split: str
    dual_correct: bool
    corrected_correct: bool
    pairs_correct: bool
    validation_failed: bool


@dataclass
class SplitStats:
    n: int = 0
    dual: int = 0
    corrected: int = 0
    pairs: int = 0
    validation_failures: int = 0

    def accuracy(self) -> float | None:
        return self.dual / self.n if self.n else None


@dataclass
class EvalOutcome:
    records: list[RecordOutcome] = field(default_factory=list)
    splits: dict[str, SplitStats] = field(default_factory=dict)

    @property
    def overall(self) -> SplitStats:
        total = SplitStats()
        for s in self.splits.values():
            total.n += s.n
            total.dual += s.dual
            total.corrected += s.corrected
            total.pairs += s.pairs
            total.validation_failures += s.validation_failures
        return total


def _pair_key(pairs) -> set:
    return {
        (p.slot_index, tuple(token_texts(list(p.reparandum))), tuple(token_texts(list(p.repair))))
        for p in pairs
    }


def evaluate(
    records: list,
    label_source: LabelSource | None,
    lenient_repair: bool = False,
) -> EvalOutcome:
    """Score predicted labels against gold targets record by record.

    label_source of None means gold passthrough (the record's own labels).
    Invalid predictions are repaired first when lenient_repair is set;
    predictions still invalid are scored incorrect, never raised.
    """
    outcome = EvalOutcome()
    for rec in records:
        tokens = [t.text for t in rec.tagged.all_tokens]
        boundary = rec.tagged.boundary
        if label_source is None:
            labels = list(rec.tagged.labels)
        else:
            labels = label_source(tokens, boundary)

        validation_failed = False
        dual = corrected_ok = pairs_ok = False
        pair = TaggedPair.from_texts(
            token_texts(list(rec.tagged.request_tokens)),
            token_texts(list(rec.tagged.correction_tokens)),
            labels,
        )
        if not validate(pair).ok and lenient_repair:
            labels = repair_labels(labels, boundary)
            pair = TaggedPair.from_texts(
                token_texts(list(rec.tagged.request_tokens)),
                token_texts(list(rec.tagged.correction_tokens)),
                labels,
            )
        if not validate(pair).ok:
            validation_failed = True
        else:
            result = merge(pair)
            corrected_ok = token_texts(list(result.corrected_tokens)) == token_texts(
                list(rec.gold_corrected)
            )
            pairs_ok = _pair_key(result.pairs) == _pair_key(rec.gold_pairs)
            dual = corrected_ok and pairs_ok

        outcome.records.append(
            RecordOutcome(rec.id, rec.split, dual, corrected_ok, pairs_ok, validation_failed)
        )
        stats = outcome.splits.setdefault(rec.split, SplitStats())
        stats.n += 1
        stats.dual += dual
        stats.corrected += corrected_ok
        stats.pairs += pairs_ok
        stats.validation_failures += validation_failed
    return outcome


def _fmt_cell(stats: SplitStats | None) -> str:
    if stats is None or stats.n == 0:
        return "n/a"
    return f"{100.0 * stats.dual / stats.n:.2f} %"


def format_report(outcome: EvalOutcome) -> tuple[str, dict]:
    """Render the accuracy table (text) and the machine-readable report (dict)."""
    splits = outcome.splits
    has_val = any(name.startswith("val_") for name in splits)
    has_test = any(not name.startswith("val_") for name in splits)

    rows: list[tuple[str, SplitStats | None, SplitStats | None]] = []
    covered: set[str] = set()
    for row_name, suffix in ROW_ORDER:
        val = splits.get(f"val_{suffix}")
        test = splits.get(f"test_{suffix}")
        if val is None and test is None:
            continue
        covered.update(
            n for n in (f"val_{suffix}", f"test_{suffix}") if n in splits
        )
        rows.append((row_name, val, test))
    for name in splits:
        if name not in covered:
            rows.append((name, None, splits[name]))
            covered.add(name)

    val_total = SplitStats()
    test_total = SplitStats()
    for name, s in splits.items():
        target = val_total if name.startswith("val_") else test_total
        target.n += s.n
        target.dual += s.dual

    col1 = "validation" if has_val else ""
    col2 = "test" if has_test else ""
    name_w = max([len(r[0]) for r in rows] + [len("all together")]) + 2
    lines = [f"{'':<{name_w}}{col1:>14}{col2:>14}"]
    for row_name, val, test in rows:
        lines.append(
            f"{row_name:<{name_w}}{_fmt_cell(val):>14}{_fmt_cell(test):>14}"
        )
    lines.append(
        f"{'all together':<{name_w}}"
        f"{_fmt_cell(val_total if has_val else None):>14}"
        f"{_fmt_cell(test_total if has_test else None):>14}"
    )
    text = "\n".join(lines) + "\n"

    report = {
        "splits": {
            name: {
                "n": s.n,
                "dual": s.dual,
                "corrected_only": s.corrected,
                "pairs_only": s.pairs,
                "validation_failures": s.validation_failures,
            }
            for name, s in sorted(splits.items())
        },
        "overall": {
            "n": outcome.overall.n,
            "dual": outcome.overall.dual,
            "corrected_only": outcome.overall.corrected,
            "pairs_only": outcome.overall.pairs,
            "validation_failures": outcome.overall.validation_failures,
            "accuracy": (
                outcome.overall.dual / outcome.overall.n
                if outcome.overall.n
                else None
            ),
        },
    }
    return text, report


def write_report(outcome: EvalOutcome, text_path, json_path) -> str:
    text, report = format_report(outcome)
    with open(text_path, "w", encoding="utf-8") as f:
        f.write(text)
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2)
        f.write("\n")
    return text
