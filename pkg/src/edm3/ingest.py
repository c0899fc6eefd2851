"""Load, write, and adapt corpora.

The interchange format is JSON Lines, one instance per line:

    {"id": str, "text": str, "split": "train"|"dev"|"test",
     "granularity": "sentence"|"window",
     "mentions": [{"start": int, "end": int, "trigger": str,
                   "type": str, "subtype": str|null}]}

Files are UTF-8 and offsets count Unicode scalar values, never bytes.
Native dataset layouts are handled by the adapters package; this module
only dispatches on the format name.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from .types import Corpus, EventMention, FormatError, Instance, ValidationError

log = logging.getLogger(__name__)

_REQUIRED = ("id", "text", "split", "granularity", "mentions")
_MENTION_REQUIRED = ("start", "end", "trigger", "type")


def _mention_from_dict(obj: dict, where: str) -> EventMention:
    for key in _MENTION_REQUIRED:
        if key not in obj:
            raise FormatError(f"{where}: mention missing field {key!r}")
    return EventMention(
        trigger_text=obj["trigger"],
        start=obj["start"],
        end=obj["end"],
        event_type=obj["type"],
        event_subtype=obj.get("subtype"),
    )


def instance_from_dict(obj: dict, where: str = "<record>") -> Instance:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object, got {type(obj).__name__}")
    for key in _REQUIRED:
        if key not in obj:
            raise FormatError(f"{where}: missing field {key!r}")
    mentions = tuple(
        _mention_from_dict(m, where) for m in obj["mentions"]
    )
    return Instance(
        id=obj["id"],
        text=obj["text"],
        mentions=mentions,
        split=obj["split"],
        granularity=obj["granularity"],
    )


def instance_to_dict(inst: Instance) -> dict:
    return {
        "id": inst.id,
        "text": inst.text,
        "split": inst.split,
        "granularity": inst.granularity,
        "mentions": [
            {
                "start": m.start,
                "end": m.end,
                "trigger": m.trigger_text,
                "type": m.event_type,
                "subtype": m.event_subtype,
            }
            for m in inst.mentions
        ],
    }


def load_canonical(path: str | Path, name: str | None = None) -> Corpus:
    """Read a canonical JSON Lines file, validating every invariant.

    Errors carry the file name and 1-based line number; span mismatches
    quote both the claimed trigger and the slice the offsets point at.
    """
    path = Path(path)
    instances: list[Instance] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{where}: invalid JSON: {exc}") from exc
            try:
                instances.append(instance_from_dict(obj, where))
            except (ValidationError, TypeError) as exc:
                raise FormatError(f"{where}: {exc}") from exc
    return Corpus(name=name or path.stem, instances=tuple(instances))


def write_canonical(corpus: Corpus, path: str | Path) -> None:
    """Write a Corpus as canonical JSON Lines; load_canonical inverts this."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for inst in corpus.instances:
            fh.write(json.dumps(instance_to_dict(inst), ensure_ascii=False))
            fh.write("\n")


def adapt(path: str | Path, format_name: str) -> Corpus:
    """Convert a native dataset layout into a canonical Corpus."""
    from . import adapters

    try:
        fn = adapters.ADAPTERS[format_name]
    except KeyError:
        known = ", ".join(sorted(adapters.ADAPTERS))
        raise FormatError(f"unknown format {format_name!r} (known: {known})") from None
    return fn(Path(path))


def filter_positive(corpus: Corpus) -> Corpus:
    """Drop instances without mentions; ids and order are preserved."""
    kept = tuple(i for i in corpus.instances if i.is_positive)
    return Corpus(name=corpus.name, instances=kept)
