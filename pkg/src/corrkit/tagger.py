"""Greedy left-to-right sparse-feature tagger with averaged updates.

The model scores the six labels per token from hashed string features and
decodes greedily, feeding back its own predictions as history.  Predictions
are not guaranteed validator-clean; repair_labels makes them so.
"""

from __future__ import annotations

import json
import random
import struct
from dataclasses import dataclass
from pathlib import Path

from .core import LABELS, validate, TaggedPair
from .errors import EmptyTrainingSet, FormatError

MODEL_MAGIC = b"CORRTAG1"
MODEL_VERSION = 1

_N = len(LABELS)
_LABEL_INDEX = {lab: i for i, lab in enumerate(LABELS)}


def _shape(word: str) -> str:
    out = []
    for ch in word:
        if ch.isdigit():
            c = "d"
        elif ch.isalpha():
            c = "X" if ch.isupper() else "x"
        else:
            c = "-"
        if not out or out[-1] != c:
            out.append(c)
    return "".join(out)


def _bucket(d: int) -> str:
    if d <= -5:
        return "<-4"
    if d >= 5:
        return ">4"
    return str(d)


def featurize(
    tokens: list[str],
    boundary: int,
    position: int,
    label_history: list[str],
) -> list[str]:
    """Feature keys for one position; history is labels for positions < position."""
    n = len(tokens)
    if not 0 <= position < n:
        raise ValueError("position out of range")

    def word(i: int) -> str:
        if i < 0:
            return "<BOS>"
        if i >= n:
            return "<EOS>"
        return tokens[i]

    w0 = tokens[position]
    low = w0.lower()
    p1 = label_history[position - 1] if position >= 1 else "<BOS>"
    p2 = label_history[position - 2] if position >= 2 else "<BOS>"
    seg = "request" if position < boundary else "correction"

    feats = [
        "bias",
        f"w0={w0}",
        f"low={low}",
        f"shape={_shape(w0)}",
        f"pre1={low[:1]}",
        f"pre2={low[:2]}",
        f"pre3={low[:3]}",
        f"suf1={low[-1:]}",
        f"suf2={low[-2:]}",
        f"suf3={low[-3:]}",
        f"w-2={word(position - 2)}",
        f"w-1={word(position - 1)}",
        f"w+1={word(position + 1)}",
        f"w+2={word(position + 2)}",
        f"seg={seg}",
        f"dist_boundary={_bucket(position - boundary)}",
        f"p1={p1}",
        f"p2={p2},{p1}",
        # conjunctions: history combined with local evidence
        f"p1+w0={p1}|{w0}",
        f"p1+w-1={p1}|{word(position - 1)}",
        f"p1+shape={p1}|{_shape(w0)}",
        f"p1+seg={p1}|{seg}",
        f"w-1+w0={word(position - 1)}|{w0}",
        f"w0+w+1={w0}|{word(position + 1)}",
        f"seg+w0={seg}|{w0}",
        f"seg+w-1={seg}|{word(position - 1)}",
        f"seg+w+1={seg}|{word(position + 1)}",
    ]

    # global view of the opposite segment: replacements live far from their
    # reparanda, so request-side decisions need correction-side evidence
    request_words = tokens[:boundary]
    correction_words = tokens[boundary:]
    request_set = set(request_words)
    corr_set = set(correction_words)

    # correction words absent from the request are entity-like (replacements
    # rarely repeat request words); shared words are template literals
    spans = _novel_spans(correction_words, request_set)
    feats.append(f"corr_spans={len(spans)}")

    if seg == "request":
        feats.append(f"w0_in_corr={'y' if w0 in corr_set else 'n'}")
        feats.append(f"corr_first={correction_words[0] if correction_words else '<NONE>'}")
        w_prev1 = word(position - 1)
        w_prev2 = word(position - 2)
        # which R slots were already opened left of here
        r_sofar = "".join(
            sorted({lab[1] for lab in label_history if lab in ("R1", "R2")})
        )
        n_spans = len(spans)
        feats.append(f"rsofar={r_sofar}")
        feats.append(f"rsofar+spans={r_sofar}|{n_spans}")
        feats.append(f"rsofar+spans+p1={r_sofar}|{n_spans}|{p1}")
        feats.append(f"spans+w-1={n_spans}|{w_prev1}")
        feats.append(f"spans+w-2={n_spans}|{w_prev2}")
        for start, end in spans:
            prec = _span_context(correction_words, start)
            feats.append(f"corr_span_prec={prec}")
            # does this request position's introducer match a corrected span's?
            feats.append(f"reqctx+spanprec={w_prev2}|{prec}")
            feats.append(f"p1+spanprec={p1}|{prec}")
            for w in correction_words[start:end]:
                feats.append(f"reqctx+spanw={w_prev2}|{w}")
    else:
        feats.append(f"w0_in_req={'y' if w0 in request_set else 'n'}")
        feats.append(f"w-1+w0_in_req={word(position - 1)}|{'y' if w0 in request_set else 'n'}")
        # history summaries: which R slots exist, their introducing words,
        # and which S slots were already emitted
        r_first = {}
        for i, lab in enumerate(label_history[:boundary]):
            if lab in ("R1", "R2") and lab not in r_first:
                r_first[lab] = i
        pattern = "".join(sorted(lab[1] for lab in r_first))
        feats.append(f"r_pattern={pattern}")
        s_done = "".join(
            sorted({lab[1] for lab in label_history[boundary:] if lab in ("S1", "S2")})
        )
        feats.append(f"s_done={s_done}|p1={p1}")
        my_prec = _span_context(correction_words, position - boundary)
        for lab, i in r_first.items():
            r_ctx = tokens[i - 2] if i >= 2 else "<BOS>"
            feats.append(f"{lab}_ctx={r_ctx}")
            feats.append(f"sctx+{lab}ctx={my_prec}|{r_ctx}")
        feats.append(f"sctx+pattern={my_prec}|{pattern}|{s_done}")
    return feats


def _novel_spans(correction_words, request_set):
    """Maximal runs of correction words not occurring in the request.

    Determiner-only gaps are bridged: "drawer under the oven" is one span
    even though "the" also occurs in the request.
    """
    spans = []
    start = None
    for i, w in enumerate(correction_words):
        if w not in request_set:
            if start is None:
                start = i
        elif start is not None:
            spans.append((start, i))
            start = None
    if start is not None:
        spans.append((start, len(correction_words)))
    bridged = []
    for span in spans:
        if bridged and all(
            w in ("the", "a", "an")
            for w in correction_words[bridged[-1][1] : span[0]]
        ):
            bridged[-1] = (bridged[-1][0], span[1])
        else:
            bridged.append(span)
    return bridged


def _span_context(correction_words, start):
    """The two words introducing a correction span, skipping determiners."""
    ctx = []
    i = start - 1
    while i >= 0 and len(ctx) < 2:
        w = correction_words[i]
        if w not in ("the", "a", "an"):
            ctx.append(w)
        i -= 1
    return "|".join(reversed(ctx)) if ctx else "<BOS>"


@dataclass
class TaggerModel:
    """Raw and averaged weights per feature; prediction uses the averaged map."""

    weights: dict[str, list[float]]
    averaged: dict[str, list[float]]
    epochs: int = 0
    seed: int = 0
    record_count: int = 0

    def scores(self, feats: list[str]) -> list[float]:
        s = [0.0] * _N
        avg = self.averaged
        for f in feats:
            w = avg.get(f)
            if w is not None:
                for i in range(_N):
                    s[i] += w[i]
        return s


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


def _argmax(scores: list[float]) -> int:
    best = 0
    for i in range(1, _N):
        if scores[i] > scores[best]:
            best = i
    return best


def train(records: list, config: TrainConfig = TrainConfig()) -> TaggerModel:
    """Averaged additive updates under teacher forcing (gold label history)."""
    if not records:
        raise EmptyTrainingSet("no training records")

    weights: dict[str, list[float]] = {}
    totals: dict[str, list[float]] = {}
    stamps: dict[str, list[int]] = {}
    c = 0  # update clock

    def update(f: str, lab_i: int, delta: float):
        w = weights.get(f)
        if w is None:
            w = weights[f] = [0.0] * _N
            totals[f] = [0.0] * _N
            stamps[f] = [0] * _N
        totals[f][lab_i] += (c - stamps[f][lab_i]) * w[lab_i]
        stamps[f][lab_i] = c
        w[lab_i] += delta

    order = list(range(len(records)))
    rng = random.Random(config.seed)
    for _epoch in range(config.epochs):
        if config.shuffle:
            rng.shuffle(order)
        for ri in order:
            rec = records[ri]
            tagged = rec.tagged if hasattr(rec, "tagged") else rec
            tokens = [t.text for t in tagged.all_tokens]
            gold = list(tagged.labels)
            boundary = tagged.boundary
            for pos in range(len(tokens)):
                c += 1
                feats = featurize(tokens, boundary, pos, gold[:pos])
                s = [0.0] * _N
                for f in feats:
                    w = weights.get(f)
                    if w is not None:
                        for i in range(_N):
                            s[i] += w[i]
                guess = _argmax(s)
                truth = _LABEL_INDEX[gold[pos]]
                if guess != truth:
                    for f in feats:
                        update(f, truth, 1.0)
                        update(f, guess, -1.0)

    averaged: dict[str, list[float]] = {}
    for f, w in weights.items():
        tot = totals[f]
        st = stamps[f]
        averaged[f] = [(tot[i] + (c - st[i]) * w[i]) / c for i in range(_N)]

    return TaggerModel(
        weights=weights,
        averaged=averaged,
        epochs=config.epochs,
        seed=config.seed,
        record_count=len(records),
    )


def predict(model: TaggerModel, tokens: list[str], boundary: int) -> list[str]:
    """Greedy decode; ties break toward the earlier label in C,D,R1,R2,S1,S2."""
    if not tokens:
        raise ValueError("tokens must be non-empty")
    if not 0 < boundary <= len(tokens):
        raise ValueError("boundary out of range")
    history: list[str] = []
    for pos in range(len(tokens)):
        feats = featurize(tokens, boundary, pos, history)
        history.append(LABELS[_argmax(model.scores(feats))])
    return history


def _keep_main_run(
    labels: list[str], lab: str, lo: int, hi: int, filler: str
) -> None:
    """Keep the longest (first on ties) run of lab in [lo, hi); relabel the rest."""
    runs: list[list[int]] = []
    for i in range(lo, hi):
        if labels[i] == lab:
            if runs and runs[-1][-1] == i - 1:
                runs[-1].append(i)
            else:
                runs.append([i])
    if len(runs) <= 1:
        return
    keep = max(runs, key=len)  # max is stable: first longest wins
    for run in runs:
        if run is not keep:
            for i in run:
                labels[i] = filler


def repair_labels(labels: list[str], boundary: int) -> list[str]:
    """Minimal deterministic repair so the sequence passes validation."""
    out = list(labels)
    n = len(out)

    # mislocated labels
    for i in range(boundary):
        if out[i] in ("S1", "S2"):
            out[i] = "C"
    for i in range(boundary, n):
        if out[i] in ("R1", "R2"):
            out[i] = "C"

    # one run per slot label
    for k in (1, 2):
        _keep_main_run(out, f"R{k}", 0, boundary, "C")
        _keep_main_run(out, f"S{k}", boundary, n, "D")

    # pairing: drop one-sided slots
    for k in (1, 2):
        has_r = f"R{k}" in out[:boundary]
        has_s = f"S{k}" in out[boundary:]
        if has_r and not has_s:
            for i in range(boundary):
                if out[i] == f"R{k}":
                    out[i] = "C"
        elif has_s and not has_r:
            for i in range(boundary, n):
                if out[i] == f"S{k}":
                    out[i] = "D"

    # dense slot numbering and request-order numbering
    slots = [k for k in (1, 2) if f"R{k}" in out[:boundary]]
    if slots == [2]:
        for i in range(n):
            if out[i] == "R2":
                out[i] = "R1"
            elif out[i] == "S2":
                out[i] = "S1"
    elif slots == [1, 2]:
        if out[:boundary].index("R2") < out[:boundary].index("R1"):
            swap = {"R1": "R2", "R2": "R1", "S1": "S2", "S2": "S1"}
            for i in range(n):
                out[i] = swap.get(out[i], out[i])

    # correction segment may not mix C with D/S
    corr = out[boundary:]
    if any(lab != "C" for lab in corr):
        for i in range(boundary, n):
            if out[i] == "C":
                out[i] = "D"

    return out


def save_model(model: TaggerModel, path: str | Path) -> None:
    meta = json.dumps(
        {
            "epochs": model.epochs,
            "seed": model.seed,
            "record_count": model.record_count,
            "labels": list(LABELS),
        }
    ).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MODEL_MAGIC)
        f.write(struct.pack("<I", MODEL_VERSION))
        f.write(struct.pack("<I", len(meta)))
        f.write(meta)
        f.write(struct.pack("<I", len(model.weights)))
        for key in model.weights:
            kb = key.encode("utf-8")
            f.write(struct.pack("<H", len(kb)))
            f.write(kb)
            f.write(struct.pack(f"<{_N}d", *model.weights[key]))
            f.write(struct.pack(f"<{_N}d", *model.averaged[key]))


def load_model(path: str | Path) -> TaggerModel:
    def read_exact(f, n):
        buf = f.read(n)
        if len(buf) != n:
            raise FormatError(f"{path}: truncated model file")
        return buf

    with open(path, "rb") as f:
        if f.read(len(MODEL_MAGIC)) != MODEL_MAGIC:
            raise FormatError(f"{path}: bad magic header")
        (version,) = struct.unpack("<I", read_exact(f, 4))
        if version != MODEL_VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        (meta_len,) = struct.unpack("<I", read_exact(f, 4))
        meta = json.loads(read_exact(f, meta_len))
        (n_feats,) = struct.unpack("<I", read_exact(f, 4))
        weights: dict[str, list[float]] = {}
        averaged: dict[str, list[float]] = {}
        row = struct.Struct(f"<{_N}d")
        for _ in range(n_feats):
            (klen,) = struct.unpack("<H", read_exact(f, 2))
            key = read_exact(f, klen).decode("utf-8")
            weights[key] = list(row.unpack(read_exact(f, row.size)))
            averaged[key] = list(row.unpack(read_exact(f, row.size)))
    return TaggerModel(
        weights=weights,
        averaged=averaged,
        epochs=meta.get("epochs", 0),
        seed=meta.get("seed", 0),
        record_count=meta.get("record_count", 0),
    )


def predict_pair(model: TaggerModel, pair: TaggedPair) -> list[str]:
    return predict(model, [t.text for t in pair.all_tokens], pair.boundary)
