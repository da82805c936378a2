"""Applies a validated label sequence: corrected request + entity pair extraction."""

from __future__ import annotations

from dataclasses import dataclass

from .core import EntityPair, TaggedPair, Token, validate
from .errors import ValidationFailed


@dataclass(frozen=True)
class CorrectionResult:
    corrected_tokens: tuple[Token, ...]
    pairs: tuple[EntityPair, ...]


def _slot_spans(pair: TaggedPair) -> dict[int, tuple[list[Token], list[Token]]]:
    """Per slot k, the (reparandum, repair) token lists in sequence order."""
    spans: dict[int, tuple[list[Token], list[Token]]] = {}
    tokens = pair.all_tokens
    for k in (1, 2):
        rep = [tokens[i] for i, lab in enumerate(pair.labels) if lab == f"R{k}"]
        sub = [tokens[i] for i, lab in enumerate(pair.labels) if lab == f"S{k}"]
        if rep:
            spans[k] = (rep, sub)
    return spans


def extract_pairs(pair: TaggedPair) -> tuple[EntityPair, ...]:
    """The (reparandum, repair) pairs labeled in a validated pair, by slot."""
    report = validate(pair)
    if not report.ok:
        raise ValidationFailed(report)
    spans = _slot_spans(pair)
    return tuple(
        EntityPair(k, tuple(rep), tuple(sub))
        for k, (rep, sub) in sorted(spans.items())
    )


def merge(pair: TaggedPair) -> CorrectionResult:
    """Produce the corrected request by scanning the request segment.

    C tokens are copied, D tokens skipped; the first token of an Rk run
    emits the whole Sk run in its place and the rest of the run is skipped.
    Correction-segment tokens are never emitted in place.
    """
    report = validate(pair)
    if not report.ok:
        raise ValidationFailed(report)
    spans = _slot_spans(pair)

    out_texts: list[str] = []
    emitted_slots: set[int] = set()
    for i in range(pair.boundary):
        lab = pair.labels[i]
        if lab == "C":
            out_texts.append(pair.request_tokens[i].text)
        elif lab == "D":
            continue
        else:  # R1 or R2
            k = int(lab[1])
            if k not in emitted_slots:
                emitted_slots.add(k)
                out_texts.extend(t.text for t in spans[k][1])

    corrected = tuple(Token(t, i) for i, t in enumerate(out_texts))
    pairs = tuple(
        EntityPair(k, tuple(rep), tuple(sub))
        for k, (rep, sub) in sorted(spans.items())
    )
    return CorrectionResult(corrected, pairs)
