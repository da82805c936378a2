"""Shared oracles and hypothesis strategies for the test suite."""

from itertools import groupby

import hypothesis.strategies as st

from corrkit.core import TaggedPair


def oracle_merge(request, correction, labels):
    """Independent run-based re-implementation of the corrected-request scan.

    Groups the request-segment labels into maximal runs: a C run copies its
    tokens, a D run drops them, an Rk run is replaced wholesale by the Sk
    tokens gathered from the correction segment.
    """
    boundary = len(request)
    s_tokens = {
        k: [
            correction[i - boundary]
            for i, lab in enumerate(labels)
            if lab == f"S{k}"
        ]
        for k in (1, 2)
    }
    out = []
    indexed = list(enumerate(labels[:boundary]))
    for lab, run in groupby(indexed, key=lambda p: p[1]):
        run = list(run)
        if lab == "C":
            out.extend(request[i] for i, _ in run)
        elif lab.startswith("R"):
            out.extend(s_tokens[int(lab[1])])
    return out


def oracle_pairs(request, correction, labels):
    boundary = len(request)
    pairs = []
    for k in (1, 2):
        rep = [request[i] for i, lab in enumerate(labels[:boundary]) if lab == f"R{k}"]
        sub = [
            correction[i - boundary]
            for i, lab in enumerate(labels)
            if lab == f"S{k}"
        ]
        if rep:
            pairs.append((k, rep, sub))
    return pairs


_WORDS = st.text(alphabet="abcdefg", min_size=1, max_size=4)


def _words(min_size, max_size):
    return st.lists(_WORDS, min_size=min_size, max_size=max_size)


@st.composite
def valid_tagged_pairs(draw):
    """TaggedPairs that satisfy every validation rule, with 0-2 slots."""
    n_slots = draw(st.integers(min_value=0, max_value=2))

    req_tokens, req_labels = [], []

    def emit(words, label):
        req_tokens.extend(words)
        req_labels.extend([label] * len(words))

    emit(draw(_words(0, 3)), "C")
    r_spans = []
    for k in range(1, n_slots + 1):
        span = draw(_words(1, 3))
        r_spans.append(span)
        emit(span, f"R{k}")
        emit(draw(_words(1 if k < n_slots else 0, 3)), "C")
    if not req_tokens:
        emit(draw(_words(1, 4)), "C")
    # optional disfluent deletions inside the request
    if draw(st.booleans()) and req_tokens:
        i = draw(st.integers(min_value=0, max_value=len(req_tokens)))
        splits_r_run = (
            0 < i < len(req_labels)
            and req_labels[i - 1] == req_labels[i]
            and req_labels[i].startswith("R")
        )
        if not splits_r_run:
            req_tokens.insert(i, "uh")
            req_labels.insert(i, "D")

    corr_tokens, corr_labels = [], []
    if n_slots:
        interregnum = draw(_words(0, 2))
        corr_tokens.extend(interregnum)
        corr_labels.extend(["D"] * len(interregnum))
        s_order = list(range(1, n_slots + 1))
        if draw(st.booleans()):
            s_order.reverse()
        for k in s_order:
            span = draw(_words(1, 3))
            corr_tokens.extend(span)
            corr_labels.extend([f"S{k}"] * len(span))
            tail = draw(_words(0, 1))
            corr_tokens.extend(tail)
            corr_labels.extend(["D"] * len(tail))
    else:
        choice = draw(st.sampled_from(["empty", "all_c", "all_d"]))
        if choice != "empty":
            words = draw(_words(1, 3))
            corr_tokens.extend(words)
            corr_labels.extend(["C" if choice == "all_c" else "D"] * len(words))

    return TaggedPair.from_texts(req_tokens, corr_tokens, req_labels + corr_labels)
