"""Multi-sentence window corpus stored as JSON Lines token documents.

One record per annotated window:

    {"doc_key": str, "sentences": [[token, ...], ...],
     "evt_triggers": [[start_tok, end_tok, [[label, ...], ...]], ...]}

Token indices run over the flattened window and the end index is
inclusive. Window text is the tokens joined with single spaces, so
character offsets follow directly from token lengths.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..types import Corpus, EventMention, FormatError, Instance
from . import build_corpus, dedup_mentions, split_files, split_label


def _token_offsets(tokens: list[str]) -> list[tuple[int, int]]:
    spans = []
    pos = 0
    for tok in tokens:
        spans.append((pos, pos + len(tok)))
        pos += len(tok) + 1
    return spans


def _window_instance(obj: dict, split: str, where: str) -> Instance:
    try:
        doc_key = obj["doc_key"]
        sentences = obj["sentences"]
        triggers = obj.get("evt_triggers", [])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{where}: malformed record: {exc}") from exc
    tokens = [tok for sent in sentences for tok in sent]
    spans = _token_offsets(tokens)
    text = " ".join(tokens)
    mentions = []
    for trig in triggers:
        try:
            start_tok, end_tok, labels = trig[0], trig[1], trig[2]
        except (IndexError, TypeError) as exc:
            raise FormatError(f"{where}: malformed evt_triggers entry: {trig!r}") from exc
        if not 0 <= start_tok <= end_tok < len(tokens):
            raise FormatError(
                f"{where}: trigger token span [{start_tok}, {end_tok}] "
                f"outside window of {len(tokens)} tokens"
            )
        lo, hi = spans[start_tok][0], spans[end_tok][1]
        for entry in labels:
            etype, subtype = split_label(entry[0])
            mentions.append(
                EventMention(
                    trigger_text=text[lo:hi],
                    start=lo,
                    end=hi,
                    event_type=etype,
                    event_subtype=subtype,
                )
            )
    return Instance(
        id=f"{split}/{doc_key}",
        text=text,
        mentions=dedup_mentions(mentions, where),
        split=split,
        granularity="window",
    )


def adapt(path: Path) -> Corpus:
    instances = []
    for split, file in split_files(path, (".jsonlines", ".jsonl")):
        with file.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                where = f"{file}:{lineno}"
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{where}: invalid JSON: {exc}") from exc
                instances.append(_window_instance(obj, split, where))
    return build_corpus("rams", instances)
