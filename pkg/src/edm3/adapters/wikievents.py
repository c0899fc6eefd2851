"""Document corpus with sentence boundaries and char-offset token lists.

One JSON Lines record per document:

    {"doc_id": str, "text": str,
     "sentences": [[[token, start, end], ...], ...] or
                  [[[[token, start, end], ...], sent_text], ...],
     "event_mentions": [{"event_type": str,
                         "trigger": {"start": int, "end": int,
                                     "sent_idx": int}}, ...]}

Trigger start/end are document-level token indices with an exclusive
end; token offsets are character positions in the document text. Every
sentence becomes one instance, negatives included.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..types import Corpus, EventMention, FormatError, Instance
from . import build_corpus, dedup_mentions, split_files, split_label


def _sentence_tokens(raw) -> list[tuple[str, int, int]]:
    # Tolerate both bare token lists and [tokens, sent_text] pairs.
    if (
        isinstance(raw, list)
        and len(raw) == 2
        and isinstance(raw[1], str)
        and isinstance(raw[0], list)
    ):
        raw = raw[0]
    return [(t[0], t[1], t[2]) for t in raw]


def _doc_instances(obj: dict, split: str, where: str) -> list[Instance]:
    try:
        doc_id = obj["doc_id"]
        text = obj["text"]
        sentences = [_sentence_tokens(s) for s in obj["sentences"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"{where}: malformed record: {exc}") from exc
    flat = [tok for sent in sentences for tok in sent]
    per_sentence: list[list[EventMention]] = [[] for _ in sentences]
    bounds = []
    for sent in sentences:
        if not sent:
            raise FormatError(f"{where}: empty sentence token list")
        bounds.append((sent[0][1], sent[-1][2]))
    for ev in obj.get("event_mentions", []):
        trig = ev.get("trigger", {})
        try:
            start_tok, end_tok, sent_idx = trig["start"], trig["end"], trig["sent_idx"]
            etype, subtype = split_label(ev["event_type"])
        except (KeyError, TypeError) as exc:
            raise FormatError(f"{where}: malformed event mention: {exc}") from exc
        if not 0 <= start_tok < end_tok <= len(flat):
            raise FormatError(
                f"{where}: trigger token span [{start_tok}, {end_tok}) "
                f"outside document of {len(flat)} tokens"
            )
        if not 0 <= sent_idx < len(sentences):
            raise FormatError(f"{where}: sent_idx {sent_idx} out of range")
        lo, hi = flat[start_tok][1], flat[end_tok - 1][2]
        base = bounds[sent_idx][0]
        per_sentence[sent_idx].append(
            EventMention(
                trigger_text=text[lo:hi],
                start=lo - base,
                end=hi - base,
                event_type=etype,
                event_subtype=subtype,
            )
        )
    instances = []
    for idx, (lo, hi) in enumerate(bounds):
        instances.append(
            Instance(
                id=f"{split}/{doc_id}/{idx}",
                text=text[lo:hi],
                mentions=dedup_mentions(per_sentence[idx], f"{where} sent {idx}"),
                split=split,
                granularity="sentence",
            )
        )
    return instances


def adapt(path: Path) -> Corpus:
    instances = []
    for split, file in split_files(path, (".jsonl", ".jsonlines", ".json")):
        with file.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                where = f"{file}:{lineno}"
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{where}: invalid JSON: {exc}") from exc
                instances.extend(_doc_instances(obj, split, where))
    return build_corpus("wikievents", instances)
