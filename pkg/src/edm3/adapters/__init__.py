"""Adapters from native dataset layouts to the canonical corpus.

Each adapter takes a file or directory path and returns a Corpus. Split
membership comes from file names: a directory is scanned for files whose
stem starts with train/dev/devel/valid/test, and a single file must name
its split the same way. Event type labels are lowercased and truncated
to at most two levels (type, subtype); deeper native hierarchies drop
everything past the second level.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable, Iterable

from ..types import Corpus, EventMention, FormatError, Instance

log = logging.getLogger(__name__)

# Native stem prefix -> canonical split. Some packagings say "devel" or
# "valid" for the dev split.
_STEM_SPLITS = (
    ("train", "train"),
    ("devel", "dev"),
    ("dev", "dev"),
    ("valid", "dev"),
    ("test", "test"),
)


def split_for_stem(stem: str) -> str | None:
    for prefix, split in _STEM_SPLITS:
        if stem.lower().startswith(prefix):
            return split
    return None


def split_files(path: Path, suffixes: Iterable[str]) -> list[tuple[str, Path]]:
    """Resolve (split, file) pairs from a directory or a single file."""
    if path.is_file():
        split = split_for_stem(path.stem)
        if split is None:
            raise FormatError(
                f"{path}: cannot infer split from file name; "
                "name it train*/dev*/valid*/test* or pass a directory"
            )
        return [(split, path)]
    if not path.is_dir():
        raise FormatError(f"{path}: no such file or directory")
    found: dict[str, Path] = {}
    for child in sorted(path.iterdir()):
        if child.suffix not in suffixes or not child.is_file():
            continue
        split = split_for_stem(child.stem)
        if split is None or split in found:
            continue
        found[split] = child
    if not found:
        raise FormatError(
            f"{path}: no {'/'.join(suffixes)} files with train/dev/valid/test stems"
        )
    return sorted(found.items())


def split_label(native_type: str) -> tuple[str, str | None]:
    """Lowercase a native label and keep at most type.subtype."""
    parts = native_type.lower().split(".")
    if len(parts) == 1:
        return parts[0], None
    return parts[0], parts[1]


def dedup_mentions(
    mentions: Iterable[EventMention], where: str
) -> tuple[EventMention, ...]:
    """Drop exact duplicate annotations, keeping first occurrence."""
    seen = set()
    kept = []
    dropped = 0
    for m in mentions:
        key = m.dedup_key()
        if key in seen:
            dropped += 1
            continue
        seen.add(key)
        kept.append(m)
    if dropped:
        log.warning("%s: dropped %d duplicate annotation(s)", where, dropped)
    return tuple(kept)


def build_corpus(name: str, instances: list[Instance]) -> Corpus:
    return Corpus(name=name, instances=tuple(instances))


from . import maven, mlee, rams, wikievents  # noqa: E402

ADAPTERS: dict[str, Callable[[Path], Corpus]] = {
    "rams": rams.adapt,
    "wikievents": wikievents.adapt,
    "maven": maven.adapt,
    "mlee-standoff": mlee.adapt,
}
