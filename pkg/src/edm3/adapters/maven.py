"""Sentence corpus with token-index trigger offsets.

One JSON Lines record per document:

    {"id": str,
     "content": [{"sentence": str, "tokens": [str, ...]}, ...],
     "events": [{"type": str,
                 "mention": [{"sent_id": int,
                              "offset": [start_tok, end_tok]}, ...]}, ...]}

Trigger offsets are token index ranges with an exclusive end, local to
their sentence. Character positions are recovered by scanning each
sentence for its tokens left to right, so tokens need not be separated
by exactly one space.

Split mapping is unusual: the released test file carries candidate
spans, not labels, so it is skipped with a warning, and the labeled
valid file serves as the test split. That is the split scored in
practice for this dataset.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from ..types import Corpus, EventMention, FormatError, Instance
from . import build_corpus, dedup_mentions, split_for_stem, split_label

log = logging.getLogger(__name__)

_SUFFIXES = (".jsonl", ".jsonlines", ".json")


def _resolve_files(path: Path) -> list[tuple[str, Path]]:
    # train -> train, valid/dev -> test (the labeled evaluation split),
    # native test -> skipped (no labels to adapt).
    if path.is_file():
        candidates = [path]
    elif path.is_dir():
        candidates = [
            c for c in sorted(path.iterdir()) if c.is_file() and c.suffix in _SUFFIXES
        ]
    else:
        raise FormatError(f"{path}: no such file or directory")
    found: dict[str, Path] = {}
    for file in candidates:
        native = split_for_stem(file.stem)
        if native == "test":
            log.warning("%s: skipped, the native test split is unlabeled", file)
            continue
        split = {"train": "train", "dev": "test"}.get(native)
        if split is None or split in found:
            continue
        found[split] = file
    if not found:
        raise FormatError(f"{path}: no usable train/valid files")
    return sorted(found.items())


def _token_spans(sentence: str, tokens: list[str], where: str) -> list[tuple[int, int]]:
    spans = []
    pos = 0
    for tok in tokens:
        idx = sentence.find(tok, pos)
        if idx == -1:
            raise FormatError(f"{where}: token {tok!r} not found in sentence")
        spans.append((idx, idx + len(tok)))
        pos = idx + len(tok)
    return spans


def _doc_instances(obj: dict, split: str, where: str) -> list[Instance]:
    try:
        doc_id = obj["id"]
        content = obj["content"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{where}: malformed record: {exc}") from exc
    per_sentence: list[list[EventMention]] = [[] for _ in content]
    span_cache: dict[int, list[tuple[int, int]]] = {}
    for event in obj.get("events", []):
        etype, subtype = split_label(event["type"])
        for mention in event.get("mention", []):
            try:
                sent_id = mention["sent_id"]
                start_tok, end_tok = mention["offset"]
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{where}: malformed mention: {exc}") from exc
            if not 0 <= sent_id < len(content):
                raise FormatError(f"{where}: sent_id {sent_id} out of range")
            sent = content[sent_id]
            if sent_id not in span_cache:
                span_cache[sent_id] = _token_spans(
                    sent["sentence"], sent["tokens"], where
                )
            spans = span_cache[sent_id]
            if not 0 <= start_tok < end_tok <= len(spans):
                raise FormatError(
                    f"{where}: token offset [{start_tok}, {end_tok}) outside "
                    f"sentence {sent_id} of {len(spans)} tokens"
                )
            lo, hi = spans[start_tok][0], spans[end_tok - 1][1]
            per_sentence[sent_id].append(
                EventMention(
                    trigger_text=sent["sentence"][lo:hi],
                    start=lo,
                    end=hi,
                    event_type=etype,
                    event_subtype=subtype,
                )
            )
    return [
        Instance(
            id=f"{split}/{doc_id}/{idx}",
            text=sent["sentence"],
            mentions=dedup_mentions(per_sentence[idx], f"{where} sent {idx}"),
            split=split,
            granularity="sentence",
        )
        for idx, sent in enumerate(content)
    ]


def adapt(path: Path) -> Corpus:
    instances = []
    for split, file in _resolve_files(path):
        with file.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                where = f"{file}:{lineno}"
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{where}: invalid JSON: {exc}") from exc
                if "events" not in obj and "candidates" in obj:
                    raise FormatError(
                        f"{where}: record has candidates but no events; "
                        "unlabeled files cannot be adapted"
                    )
                instances.extend(_doc_instances(obj, split, where))
    return build_corpus("maven", instances)
