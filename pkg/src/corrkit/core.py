"""Tokens, the six-label scheme, tagged request/correction pairs, and validation.

A labeled example is the concatenation of the request tokens and the
correction tokens, with one label per token:

  C   copy the token into the corrected request
  D   delete the token (interregnum / discarded correction material)
  R1  first entity in the request that may be replaced
  R2  second such entity
  S1  replacement entity for the R1 span
  S2  replacement entity for the R2 span
"""

from __future__ import annotations

from dataclasses import dataclass, field

LABELS: tuple[str, ...] = ("C", "D", "R1", "R2", "S1", "S2")
LABEL_SET = frozenset(LABELS)

EDGE_PUNCT = ",.?!"


@dataclass(frozen=True)
class Token:
    text: str
    index: int

    def __post_init__(self):
        if not self.text:
            raise ValueError("token text must be non-empty")
        if any(ch.isspace() for ch in self.text):
            raise ValueError(f"token text contains whitespace: {self.text!r}")
        if self.index < 0:
            raise ValueError("token index must be >= 0")


def make_tokens(texts: list[str]) -> list[Token]:
    """Build a token sequence with consecutive indices from raw strings."""
    return [Token(text, i) for i, text in enumerate(texts)]


def token_texts(tokens: list[Token]) -> list[str]:
    return [t.text for t in tokens]


def tokenize(text: str, lowercase: bool = True) -> list[Token]:
    """Split on whitespace, strip , . ? ! from token edges, drop emptied tokens."""
    out: list[str] = []
    for raw in text.split():
        stripped = raw.strip(EDGE_PUNCT)
        if not stripped:
            continue
        out.append(stripped.lower() if lowercase else stripped)
    return make_tokens(out)


@dataclass(frozen=True)
class TaggedPair:
    """Request tokens, correction tokens, and one label per concatenated token."""

    request_tokens: tuple[Token, ...]
    correction_tokens: tuple[Token, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.request_tokens:
            raise ValueError("request must contain at least one token")
        total = len(self.request_tokens) + len(self.correction_tokens)
        if len(self.labels) != total:
            raise ValueError(
                f"expected {total} labels, got {len(self.labels)}"
            )
        for lab in self.labels:
            if lab not in LABEL_SET:
                raise ValueError(f"unknown label {lab!r}")
        for seq in (self.request_tokens, self.correction_tokens):
            for i, tok in enumerate(seq):
                if tok.index != i:
                    raise ValueError("token indices must be consecutive from 0")

    @property
    def boundary(self) -> int:
        return len(self.request_tokens)

    @property
    def all_tokens(self) -> tuple[Token, ...]:
        return self.request_tokens + self.correction_tokens

    @classmethod
    def from_texts(
        cls,
        request: list[str],
        correction: list[str],
        labels: list[str],
    ) -> "TaggedPair":
        return cls(
            tuple(make_tokens(request)),
            tuple(make_tokens(correction)),
            tuple(labels),
        )


@dataclass(frozen=True)
class EntityPair:
    """One (reparandum, repair) replacement extracted from a tagged pair."""

    slot_index: int
    reparandum: tuple[Token, ...]
    repair: tuple[Token, ...]

    def __post_init__(self):
        if self.slot_index not in (1, 2):
            raise ValueError("slot_index must be 1 or 2")
        if not self.reparandum or not self.repair:
            raise ValueError("reparandum and repair must be non-empty")


@dataclass(frozen=True)
class Violation:
    code: str
    token_index: int
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def _runs(indices: list[int]) -> list[list[int]]:
    """Group sorted indices into maximal consecutive runs."""
    runs: list[list[int]] = []
    for i in indices:
        if runs and runs[-1][-1] == i - 1:
            runs[-1].append(i)
        else:
            runs.append([i])
    return runs


def validate(pair: TaggedPair) -> ValidationReport:
    """Check the well-formedness rules V1..V7 of a labeled pair.

    V1  R labels only in the request segment
    V2  S labels only in the correction segment
    V3  each Rk / Sk label set forms one contiguous run
    V4  Rk present iff Sk present
    V5  R2 implies R1 (slot numbering is dense)
    V6  the correction segment is either all C (no-op) or free of C
    V7  the R1 run precedes the R2 run in the request
    """
    labels = pair.labels
    boundary = pair.boundary
    violations: list[Violation] = []
    positions: dict[str, list[int]] = {lab: [] for lab in LABELS}
    for i, lab in enumerate(labels):
        positions[lab].append(i)

    for k in (1, 2):
        bad = [i for i in positions[f"R{k}"] if i >= boundary]
        if bad:
            violations.append(
                Violation("V1", bad[0], f"R{k} in correction segment")
            )
        bad = [i for i in positions[f"S{k}"] if i < boundary]
        if bad:
            violations.append(
                Violation("V2", bad[0], f"S{k} in request segment")
            )

    for lab in ("R1", "R2", "S1", "S2"):
        runs = _runs(positions[lab])
        if len(runs) > 1:
            violations.append(
                Violation("V3", runs[1][0], f"{lab} labels are discontiguous")
            )
            break

    for k in (1, 2):
        r, s = positions[f"R{k}"], positions[f"S{k}"]
        if bool(r) != bool(s):
            present, absent = (f"R{k}", f"S{k}") if r else (f"S{k}", f"R{k}")
            idx = (r or s)[0]
            violations.append(
                Violation("V4", idx, f"{present} present without {absent}")
            )

    if (positions["R2"] or positions["S2"]) and not positions["R1"]:
        idx = (positions["R2"] or positions["S2"])[0]
        violations.append(Violation("V5", idx, "slot 2 used without slot 1"))

    corr_labels = labels[boundary:]
    if any(lab != "C" for lab in corr_labels):
        first_c = next(
            (boundary + i for i, lab in enumerate(corr_labels) if lab == "C"),
            None,
        )
        if first_c is not None:
            violations.append(
                Violation(
                    "V6", first_c, "C mixed with D/S in correction segment"
                )
            )

    if positions["R1"] and positions["R2"]:
        if positions["R2"][0] < positions["R1"][0]:
            violations.append(
                Violation("V7", positions["R2"][0], "R2 run precedes R1 run")
            )

    return ValidationReport(tuple(violations))
