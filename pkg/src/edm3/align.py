"""Project predicted trigger strings onto token-level labels.

Generative outputs name trigger strings but cannot localize them, so
projection searches the instance text for case-exact occurrences that
start and end on token boundaries. By default every occurrence is
labeled; a trigger string with more than one occurrence is recorded as
ambiguous so reports can surface how often localization was guessed.
Gold labelings come straight from character offsets and never search.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterator, Literal, NamedTuple

from .parse import ParsedPrediction
from .types import Instance, TaskKind, ValidationError

OUTSIDE = "O"

_WORD = re.compile(r"\S+")


class Token(NamedTuple):
    text: str
    start: int
    end: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def tokenize(text: str) -> list[Token]:
    """Whitespace tokens with leading/trailing punctuation peeled off.

    Each peeled punctuation character becomes its own token; internal
    punctuation (hyphens, apostrophes, decimal points) stays attached.
    Offsets index into ``text`` exactly.
    """
    tokens: list[Token] = []
    for m in _WORD.finditer(text):
        chunk, base = m.group(), m.start()
        lo, hi = 0, len(chunk)
        while lo < hi and _is_punct(chunk[lo]):
            lo += 1
        while hi > lo and _is_punct(chunk[hi - 1]):
            hi -= 1
        for i in range(lo):
            tokens.append(Token(chunk[i], base + i, base + i + 1))
        if lo < hi:
            tokens.append(Token(chunk[lo:hi], base + lo, base + hi))
        for i in range(hi, len(chunk)):
            tokens.append(Token(chunk[i], base + i, base + i + 1))
    return tokens


@dataclass
class TokenLabeling:
    """Per-token label sets over one instance, plus projection diagnostics."""

    instance_id: str
    tokens: list[Token]
    label_sets: list[frozenset[str]]
    hallucinations: list[str] = field(default_factory=list)
    ambiguous: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.label_sets):
            raise ValidationError(
                f"{self.instance_id}: {len(self.tokens)} tokens vs "
                f"{len(self.label_sets)} label sets"
            )

    def single_labels(self) -> list[str]:
        """Debug view: one label per token, lexicographically first wins."""
        return [min(s) if s else OUTSIDE for s in self.label_sets]

    def to_json_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "tokens": [list(t) for t in self.tokens],
            "labels": [sorted(s) for s in self.label_sets],
            "hallucinations": list(self.hallucinations),
            "ambiguous": list(self.ambiguous),
        }


def _occurrences(trigger: str, text: str, tokens: list[Token]) -> Iterator[tuple[int, int]]:
    # Case-exact matches that begin at a token start and end at a token end.
    starts = {t.start for t in tokens}
    ends = {t.end for t in tokens}
    pos = text.find(trigger)
    while pos != -1:
        stop = pos + len(trigger)
        if pos in starts and stop in ends:
            yield pos, stop
        pos = text.find(trigger, pos + 1)


def project(
    prediction: ParsedPrediction,
    text: str,
    occurrences: Literal["all", "first"] = "all",
) -> TokenLabeling:
    """Turn a typed trigger prediction into token label sets over text.

    Triggers with no token-aligned occurrence are hallucinations and
    label nothing. With ``occurrences="all"`` every occurrence is
    labeled; ``"first"`` labels only the earliest one.
    """
    if prediction.task is not TaskKind.ED:
        raise ValidationError(f"project needs ED predictions, got {prediction.task}")
    tokens = tokenize(text)
    sets: list[set[str]] = [set() for _ in tokens]
    hallucinations: list[str] = []
    ambiguous: list[str] = []
    seen_multi: set[str] = set()
    for trigger, type_label in prediction.items:
        if trigger is None or type_label is None:
            continue  # EI/EC items cannot land on the ED path, but stay total
        spans = list(_occurrences(trigger, text, tokens))
        if not spans:
            hallucinations.append(trigger)
            continue
        if len(spans) > 1 and trigger not in seen_multi:
            seen_multi.add(trigger)
            ambiguous.append(trigger)
        if occurrences == "first":
            spans = spans[:1]
        for lo, hi in spans:
            for i, tok in enumerate(tokens):
                if tok.start >= lo and tok.end <= hi:
                    sets[i].add(type_label)
    return TokenLabeling(
        prediction.instance_id,
        tokens,
        [frozenset(s) for s in sets],
        hallucinations=hallucinations,
        ambiguous=ambiguous,
    )


def gold_labeling(instance: Instance) -> TokenLabeling:
    """Token label sets straight from gold offsets; tokens overlapping a
    mention span carry its label."""
    tokens = tokenize(instance.text)
    sets: list[set[str]] = [set() for _ in tokens]
    for m in instance.mentions:
        for i, tok in enumerate(tokens):
            if tok.start < m.end and tok.end > m.start:
                sets[i].add(m.label)
    return TokenLabeling(instance.id, tokens, [frozenset(s) for s in sets])
