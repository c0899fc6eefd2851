"""Render gold annotations as the delimited target strings the model learns.

Three target grammars:

* EI  — unique trigger surfaces joined with `` | ``
* EC  — unique type labels joined with `` | ``
* ED  — ``trigger->type`` items joined with `` | ``

An instance with no events renders as the literal label ``NONE``. A
multi-class trigger (one surface string, several types in the same
instance) appears once in EI but once per type in ED, so the three lists
may have different lengths.
"""

from __future__ import annotations

from dataclasses import dataclass

from .types import Instance, TaskKind, ValidationError

NONE_LABEL = "NONE"
ITEM_SEP = " | "
PAIR_SEP = "->"


@dataclass(frozen=True)
class TargetString:
    task: TaskKind
    text: str


def _check_item(kind: str, value: str, instance_id: str) -> str:
    # The grammar has no escaping: a delimiter inside a label, surrounding
    # whitespace, or the literal NONE token cannot survive a round trip.
    if "|" in value or PAIR_SEP in value:
        raise ValidationError(
            f"instance {instance_id!r}: {kind} {value!r} contains a delimiter "
            f"and cannot be rendered"
        )
    if value != value.strip() or not value.strip():
        raise ValidationError(
            f"instance {instance_id!r}: {kind} {value!r} has surrounding whitespace "
            f"or is empty"
        )
    if value == NONE_LABEL:
        raise ValidationError(
            f"instance {instance_id!r}: {kind} collides with the reserved "
            f"label {NONE_LABEL!r}"
        )
    return value


def make_ei_target(instance: Instance) -> TargetString:
    """Unique trigger surfaces, ordered by first character offset."""
    seen: set[str] = set()
    items: list[str] = []
    for m in instance.sorted_mentions():
        if m.trigger_text not in seen:
            seen.add(m.trigger_text)
            items.append(_check_item("trigger", m.trigger_text, instance.id))
    return TargetString(TaskKind.EI, ITEM_SEP.join(items) if items else NONE_LABEL)


def make_ec_target(instance: Instance) -> TargetString:
    """Unique type labels, ordered by first occurrence in reading order."""
    seen: set[str] = set()
    items: list[str] = []
    for m in instance.sorted_mentions():
        if m.label not in seen:
            seen.add(m.label)
            items.append(_check_item("type label", m.label, instance.id))
    return TargetString(TaskKind.EC, ITEM_SEP.join(items) if items else NONE_LABEL)


def make_ed_target(instance: Instance) -> TargetString:
    """One ``trigger->type`` item per distinct (trigger, type) pair.

    Items are ordered by the first offset at which the trigger occurs, then
    by annotation order, which keeps the items of a multi-class trigger
    adjacent.
    """
    ordered = instance.sorted_mentions()
    first_offset: dict[str, int] = {}
    for m in ordered:
        first_offset.setdefault(m.trigger_text, m.start)
    pairs: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for m in ordered:
        pair = (m.trigger_text, m.label)
        if pair not in seen:
            seen.add(pair)
            pairs.append(pair)
    pairs.sort(key=lambda p: first_offset[p[0]])  # stable: annotation order among ties
    items = []
    for trigger, label in pairs:
        _check_item("trigger", trigger, instance.id)
        _check_item("type label", label, instance.id)
        items.append(f"{trigger}{PAIR_SEP}{label}")
    return TargetString(TaskKind.ED, ITEM_SEP.join(items) if items else NONE_LABEL)


_MAKERS = {
    TaskKind.EI: make_ei_target,
    TaskKind.EC: make_ec_target,
    TaskKind.ED: make_ed_target,
}


def make_target(instance: Instance, task: TaskKind) -> TargetString:
    return _MAKERS[task](instance)


def targets_for(instance: Instance) -> dict[TaskKind, TargetString]:
    """All three targets; ED's triggers and types agree with EI and EC."""
    return {task: maker(instance) for task, maker in _MAKERS.items()}
