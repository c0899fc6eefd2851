"""BioNLP standoff triples (.txt/.a1/.a2) to sentence instances.

Layout: a root directory with train/dev(el)/test subdirectories, each
holding documents as <stem>.txt plus <stem>.a1/<stem>.a2 annotation
files. Trigger spans are the T lines referenced by E lines; entity-only
T lines are ignored. Abstracts are segmented into sentences with an
offset-preserving heuristic (newlines, then sentence-final punctuation
before an uppercase or digit, with an abbreviation guard); segments a
trigger span would straddle are merged so no annotation is ever cut.
Negative sentences are kept.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

from ..types import Corpus, EventMention, FormatError, Instance
from . import build_corpus, dedup_mentions

log = logging.getLogger(__name__)

_SENT_BREAK = re.compile(r"(?<=[.!?])\s+")
_LAST_WORD = re.compile(r"([A-Za-z]+)\.$")
_ABBREV = {"al", "fig", "figs", "vs", "cf", "ca", "etc", "approx", "resp", "e.g", "i.e"}


def _boundaries(text: str) -> list[int]:
    cuts = set()
    for m in re.finditer(r"\n+", text):
        cuts.add(m.end())
    for m in _SENT_BREAK.finditer(text):
        nxt = text[m.end()] if m.end() < len(text) else ""
        if not (nxt.isupper() or nxt.isdigit()):
            continue
        word = _LAST_WORD.search(text[: m.start()])
        if word:
            w = word.group(1)
            if w.lower() in _ABBREV or (len(w) == 1 and w.isupper()):
                continue
        cuts.add(m.end())
    return sorted(cuts)


def _segments(text: str, spans: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Sentence segments as (lo, hi) offsets, merged so every span in
    ``spans`` falls inside a single segment, trimmed of whitespace."""
    edges = [0, *_boundaries(text), len(text)]
    segs = []
    for lo, hi in zip(edges, edges[1:]):
        while lo < hi and text[lo].isspace():
            lo += 1
        while hi > lo and text[hi - 1].isspace():
            hi -= 1
        if lo < hi:
            segs.append((lo, hi))
    for s, e in sorted(spans):
        first = last = None
        for i, (lo, hi) in enumerate(segs):
            if lo < e and hi > s:
                if first is None:
                    first = i
                last = i
        if first is not None and last != first:
            segs[first : last + 1] = [(segs[first][0], segs[last][1])]
    return segs


def _parse_standoff(doc: Path, text: str) -> list[EventMention]:
    spans: dict[str, tuple[str, int, int, str]] = {}
    trigger_refs: list[tuple[str, str]] = []
    seen_refs: set[tuple[str, str]] = set()
    for ann in (doc.with_suffix(".a1"), doc.with_suffix(".a2")):
        if not ann.exists():
            continue
        for lineno, line in enumerate(ann.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            where = f"{ann}:{lineno}"
            fields = line.split("\t")
            if line.startswith("T"):
                if len(fields) < 3:
                    raise FormatError(f"{where}: malformed T line: {line!r}")
                tid, span_def, surface = fields[0], fields[1], fields[2]
                ttype, _, offsets = span_def.partition(" ")
                if ";" in offsets:
                    log.warning("%s: skipped discontinuous span %s", where, tid)
                    continue
                try:
                    start, end = (int(x) for x in offsets.split())
                except ValueError as exc:
                    raise FormatError(f"{where}: bad offsets in {line!r}") from exc
                if text[start:end] != surface:
                    raise FormatError(
                        f"{where}: {tid} claims {surface!r} but text slice "
                        f"[{start}:{end}] is {text[start:end]!r}"
                    )
                spans[tid] = (ttype, start, end, surface)
            elif line.startswith("E"):
                if len(fields) < 2 or not fields[1]:
                    raise FormatError(f"{where}: malformed E line: {line!r}")
                head = fields[1].split(" ")[0]
                etype, _, tid = head.partition(":")
                if not tid:
                    raise FormatError(f"{where}: E line lacks trigger ref: {line!r}")
                # Several events may share one trigger; that is one mention.
                if (etype, tid) not in seen_refs:
                    seen_refs.add((etype, tid))
                    trigger_refs.append((etype, tid))
    mentions = []
    for etype, tid in trigger_refs:
        if tid not in spans:
            log.warning("%s: trigger %s has no contiguous span, skipped", doc, tid)
            continue
        _, start, end, surface = spans[tid]
        mentions.append(
            EventMention(
                trigger_text=surface,
                start=start,
                end=end,
                event_type=etype.lower(),
            )
        )
    return mentions


def _doc_instances(doc: Path, split: str) -> list[Instance]:
    text = doc.with_suffix(".txt").read_text(encoding="utf-8")
    mentions = _parse_standoff(doc, text)
    segs = _segments(text, [(m.start, m.end) for m in mentions])
    instances = []
    for idx, (lo, hi) in enumerate(segs):
        local = [
            EventMention(
                trigger_text=m.trigger_text,
                start=m.start - lo,
                end=m.end - lo,
                event_type=m.event_type,
            )
            for m in mentions
            if m.start >= lo and m.end <= hi
        ]
        instances.append(
            Instance(
                id=f"{split}/{doc.stem}/{idx}",
                text=text[lo:hi],
                mentions=dedup_mentions(local, f"{doc} seg {idx}"),
                split=split,
                granularity="sentence",
            )
        )
    return instances


_SPLIT_DIRS = (("train", "train"), ("devel", "dev"), ("dev", "dev"), ("test", "test"))


def adapt(path: Path) -> Corpus:
    if not path.is_dir():
        raise FormatError(f"{path}: expected a directory of split subdirectories")
    by_split: dict[str, Path] = {}
    for child in sorted(path.iterdir()):
        if not child.is_dir():
            continue
        for prefix, split in _SPLIT_DIRS:
            if child.name.lower().startswith(prefix):
                by_split.setdefault(split, child)
                break
    split_dirs = sorted(by_split.items())
    if not split_dirs:
        raise FormatError(
            f"{path}: no train/dev/test subdirectories with .txt/.a1/.a2 files"
        )
    instances = []
    for split, directory in split_dirs:
        docs = sorted(directory.glob("*.txt"))
        if not docs:
            log.warning("%s: no .txt documents", directory)
        for doc in docs:
            instances.extend(_doc_instances(doc, split))
    return build_corpus("mlee", instances)
