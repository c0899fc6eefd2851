"""Parse raw model generations back into typed predictions.

The parser never raises on malformed input: every deviation from the
target grammar is recorded as a :class:`ParseIssue` and the offending
fragment is skipped. Whitespace around items and around the ``->``
delimiter is trimmed; internal whitespace of multi-word triggers is
preserved; case is never folded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import NamedTuple

from .reformulate import NONE_LABEL, PAIR_SEP
from .types import FormatError, TaskKind


class IssueKind(str, Enum):
    MISSING_ARROW = "missing_arrow"
    EMPTY_ITEM = "empty_item"
    DUPLICATE_ITEM = "duplicate_item"
    NONE_MIXED_WITH_ITEMS = "none_mixed_with_items"
    ARROW_IN_EI_OR_EC = "arrow_in_ei_or_ec"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ParseIssue:
    kind: IssueKind
    fragment: str  # substring of the raw generation


class Item(NamedTuple):
    """One predicted unit: ED fills both fields, EI only trigger, EC only type."""

    trigger: str | None
    type_label: str | None


@dataclass
class ParsedPrediction:
    instance_id: str
    task: TaskKind
    items: list[Item] = field(default_factory=list)
    is_none: bool = False
    diagnostics: list[ParseIssue] = field(default_factory=list)

    @property
    def trigger_texts(self) -> list[str]:
        return [it.trigger for it in self.items if it.trigger is not None]

    @property
    def type_labels(self) -> list[str]:
        return [it.type_label for it in self.items if it.type_label is not None]


def parse_generation(raw: str, task: TaskKind, instance_id: str) -> ParsedPrediction:
    """Split a generation on ``|`` and recover (trigger, type) items.

    The exact token ``NONE`` as the sole content marks an abstention. A
    ``NONE`` co-occurring with concrete items is dropped (the items are
    stronger evidence) and diagnosed. Duplicates keep their first
    occurrence. ED items split on the first ``->``; anything after it
    belongs to the type label.
    """
    pred = ParsedPrediction(instance_id=instance_id, task=task)
    issues = pred.diagnostics
    seen: set[Item] = set()
    none_count = 0

    for field_raw in raw.split("|"):
        fragment = field_raw.strip()
        if fragment == NONE_LABEL:
            none_count += 1
            continue
        if not fragment:
            issues.append(ParseIssue(IssueKind.EMPTY_ITEM, fragment))
            continue
        if task is TaskKind.ED:
            if PAIR_SEP not in fragment:
                issues.append(ParseIssue(IssueKind.MISSING_ARROW, fragment))
                continue
            left, right = fragment.split(PAIR_SEP, 1)
            trigger, type_label = left.strip(), right.strip()
            if not trigger or not type_label:
                issues.append(ParseIssue(IssueKind.EMPTY_ITEM, fragment))
                continue
            item = Item(trigger, type_label)
        else:
            if PAIR_SEP in fragment:
                issues.append(ParseIssue(IssueKind.ARROW_IN_EI_OR_EC, fragment))
                continue
            if task is TaskKind.EI:
                item = Item(fragment, None)
            else:
                item = Item(None, fragment)
        if item in seen:
            issues.append(ParseIssue(IssueKind.DUPLICATE_ITEM, fragment))
            continue
        seen.add(item)
        pred.items.append(item)

    if none_count:
        if pred.items:
            for _ in range(none_count):
                issues.append(ParseIssue(IssueKind.NONE_MIXED_WITH_ITEMS, NONE_LABEL))
        else:
            pred.is_none = True
            for _ in range(none_count - 1):
                issues.append(ParseIssue(IssueKind.DUPLICATE_ITEM, NONE_LABEL))
    return pred


def read_predictions(path: str | Path) -> list[ParsedPrediction]:
    """Parse a predictions file: JSON Lines of
    {"instance_id": str, "task": "EI"|"EC"|"ED", "generation": str}."""
    path = Path(path)
    preds = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
                task = TaskKind(obj["task"])
                preds.append(
                    parse_generation(obj["generation"], task, obj["instance_id"])
                )
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                raise FormatError(f"{where}: {exc}") from exc
    return preds
