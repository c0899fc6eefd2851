"""Core corpus types shared by every stage of the toolkit.

An annotated corpus is a list of instances (sentences or multi-sentence
windows), each carrying zero or more trigger mentions. Offsets are Unicode
scalar-value offsets into the instance text, never byte offsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

SPLITS = ("train", "dev", "test")
GRANULARITIES = ("sentence", "window")


class ValidationError(ValueError):
    """An instance, corpus, or target string violates a structural invariant."""


class FormatError(ValueError):
    """An input file does not match its declared layout."""


class TaskKind(str, Enum):
    """The three generative subtasks: identification, classification, detection."""

    EI = "EI"
    EC = "EC"
    ED = "ED"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EventMention:
    """One annotated trigger occurrence.

    ``trigger_text`` is the verbatim, case-preserved surface string;
    ``start``/``end`` are half-open character offsets into the owning
    instance's text. ``event_subtype`` is set only for corpora with
    two-level type labels.
    """

    trigger_text: str
    start: int
    end: int
    event_type: str
    event_subtype: str | None = None

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValidationError(
                f"mention span ({self.start}, {self.end}) is not a valid half-open range"
            )
        if not self.event_type:
            raise ValidationError("mention has an empty event type")
        if self.event_subtype == "":
            raise ValidationError("mention subtype must be None or non-empty")

    @property
    def label(self) -> str:
        """Rendered type label: ``type.subtype`` when a subtype is present."""
        if self.event_subtype is not None:
            return f"{self.event_type}.{self.event_subtype}"
        return self.event_type

    @property
    def is_multiword(self) -> bool:
        """True when the trigger surface spans more than one whitespace-delimited word."""
        return len(self.trigger_text.split()) > 1

    def dedup_key(self) -> tuple[int, int, str, str | None]:
        return (self.start, self.end, self.event_type, self.event_subtype)


@dataclass(frozen=True)
class Instance:
    """One evaluation unit: a sentence or a multi-sentence window.

    ``mentions`` may be empty (a negative instance). Identical spans with
    different types are legal multi-class triggers; exact duplicate
    annotations are rejected.
    """

    id: str
    text: str
    mentions: tuple[EventMention, ...]
    split: str
    granularity: str = "sentence"

    def __post_init__(self) -> None:
        if self.split not in SPLITS:
            raise ValidationError(f"instance {self.id!r}: unknown split {self.split!r}")
        if self.granularity not in GRANULARITIES:
            raise ValidationError(
                f"instance {self.id!r}: unknown granularity {self.granularity!r}"
            )
        seen: set[tuple[int, int, str, str | None]] = set()
        for m in self.mentions:
            if m.end > len(self.text):
                raise ValidationError(
                    f"instance {self.id!r}: mention span ({m.start}, {m.end}) ends past "
                    f"text of length {len(self.text)}"
                )
            slice_ = self.text[m.start : m.end]
            if slice_ != m.trigger_text:
                raise ValidationError(
                    f"instance {self.id!r}: trigger text {m.trigger_text!r} does not match "
                    f"text slice {slice_!r} at ({m.start}, {m.end}); case and content must "
                    f"agree exactly"
                )
            key = m.dedup_key()
            if key in seen:
                raise ValidationError(
                    f"instance {self.id!r}: duplicate annotation {key}"
                )
            seen.add(key)

    @property
    def is_positive(self) -> bool:
        return len(self.mentions) > 0

    def sorted_mentions(self) -> list[EventMention]:
        """Mentions in reading order: by start, then end, then annotation order."""
        return sorted(self.mentions, key=lambda m: (m.start, m.end))


@dataclass(frozen=True)
class Corpus:
    """A named set of instances with the train-split type inventory.

    ``type_inventory`` is derived from the train split only, so that types
    first appearing in dev/test count as unseen.
    """

    name: str
    instances: tuple[Instance, ...]
    type_inventory: frozenset[str] = field(default=frozenset())

    def __post_init__(self) -> None:
        ids: set[str] = set()
        for inst in self.instances:
            if inst.id in ids:
                raise ValidationError(f"duplicate instance id {inst.id!r}")
            ids.add(inst.id)
        inventory = frozenset(
            m.label
            for inst in self.instances
            if inst.split == "train"
            for m in inst.mentions
        )
        object.__setattr__(self, "type_inventory", inventory)

    def split_instances(self, split: str) -> list[Instance]:
        return [inst for inst in self.instances if inst.split == split]

    def __len__(self) -> int:
        return len(self.instances)
