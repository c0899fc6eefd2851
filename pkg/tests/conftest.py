"""Shared synthetic-data builders.

synth_instance composes text from filler words and trigger words that
are unique within the instance, so every trigger string occurs exactly
once and token-boundary aligned. That makes the instances unambiguous:
projecting a round-tripped target must reproduce the gold labeling
exactly. Punctuation is attached to some words to exercise the
tokenizer's peeling.
"""

from __future__ import annotations

import random

from edm3 import Corpus, EventMention, Instance, TaskKind

TYPE_POOL = tuple(
    [f"t{i}.s{j}" for i in range(4) for j in range(3)] + [f"solo{i}" for i in range(4)]
)


def _mention(trigger: str, start: int, end: int, label: str) -> EventMention:
    event_type, _, subtype = label.partition(".")
    return EventMention(trigger, start, end, event_type, subtype or None)


def synth_instance(
    rng: random.Random,
    idx: int,
    split: str = "train",
    negative: bool | None = None,
    force_mwt: bool = False,
    force_mct: bool = False,
) -> Instance:
    if negative is None:
        negative = rng.random() < 0.2
    text = ""

    def emit(word: str) -> tuple[int, int]:
        nonlocal text
        if text:
            text += " "
        start = len(text)
        text += word
        return start, len(text)

    def filler() -> None:
        emit(f"f{rng.randrange(50)}")

    mentions: list[EventMention] = []
    n_triggers = 0 if negative else rng.randint(1, 4)
    word_counter = 0
    for _ in range(rng.randint(1, 3)):
        filler()
    for t in range(n_triggers):
        if force_mwt and t == 0:
            width = rng.randint(2, 3)
        else:
            width = rng.choice((1, 1, 1, 2, 3))
        first = last = None
        for _ in range(width):
            s, e = emit(f"w{idx}x{word_counter}")
            word_counter += 1
            first = s if first is None else first
            last = e
        trigger = text[first:last]
        if force_mct and t == 0:
            k = rng.randint(2, 3)
        else:
            k = rng.choice((1, 1, 1, 2))
        for label in rng.sample(TYPE_POOL, k):
            mentions.append(_mention(trigger, first, last, label))
        if rng.random() < 0.3:
            text += rng.choice(".,;")
        for _ in range(rng.randint(1, 3)):
            filler()
    if rng.random() < 0.5:
        text += "."
    return Instance(
        id=f"i{idx}", text=text, mentions=tuple(mentions), split=split
    )


def synth_corpus(
    rng: random.Random,
    n: int,
    name: str = "synth",
    force_every: int | None = 10,
) -> Corpus:
    """n instances over all three splits; every force_every-th positive
    instance is guaranteed a multi-word and a multi-class trigger."""
    instances = []
    for i in range(n):
        split = "train" if i % 10 < 7 else ("dev" if i % 10 < 8 else "test")
        force = force_every is not None and i % force_every == 0
        instances.append(
            synth_instance(
                rng,
                i,
                split=split,
                negative=False if force else None,
                force_mwt=force,
                force_mct=force,
            )
        )
    return Corpus(name=name, instances=tuple(instances))


def brute_token_scores(gold, pred):
    """Set-theoretic token scorer, written independently of the library:
    compare {(instance, token, label)} triples and derive each averaging
    from scratch. Returns {averaging: (P, R, F1)}."""
    gold_set = set()
    pred_set = set()
    for n, (g, p) in enumerate(zip(gold, pred)):
        for i, labels in enumerate(g.label_sets):
            gold_set.update((n, i, lb) for lb in labels)
        for i, labels in enumerate(p.label_sets):
            pred_set.update((n, i, lb) for lb in labels)

    def prf(g, p):
        tp = len(g & p)
        prec = tp / len(p) if p else 0.0
        rec = tp / len(g) if g else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        return prec, rec, f1

    out = {"micro": prf(gold_set, pred_set)}
    types = sorted({lb for _, _, lb in gold_set})
    per_type = []
    for t in types:
        g = {x for x in gold_set if x[2] == t}
        p = {x for x in pred_set if x[2] == t}
        per_type.append((len(g), prf(g, p)))
    if per_type:
        for name, weigh in (("macro", lambda s: 1.0), ("weighted", float)):
            total = sum(weigh(s) for s, _ in per_type)
            out[name] = tuple(
                sum(weigh(s) * score[j] for s, score in per_type) / total
                for j in range(3)
            )
    return out


def brute_pair_counts(instance: Instance, items: list) -> tuple[int, int, int]:
    """Set comparison of (trigger, label) pairs with NONE for empty sides."""
    gold = {(m.trigger_text, m.label) for m in instance.mentions} or {("NONE", "NONE")}
    pred = {(t, lb) for t, lb in items} or {("NONE", "NONE")}
    return len(gold & pred), len(pred - gold), len(gold - pred)


def perturb_generation(rng: random.Random, instance: Instance) -> str:
    """A plausibly wrong ED generation: misses, retypes, hallucinated
    triggers, and mislabeled in-text words."""
    gold = list(dict.fromkeys((m.trigger_text, m.label) for m in instance.sorted_mentions()))
    items: list[tuple[str, str]] = []
    for trigger, label in gold:
        roll = rng.random()
        if roll < 0.2:
            continue
        if roll < 0.4:
            items.append((trigger, rng.choice(TYPE_POOL)))
        else:
            items.append((trigger, label))
    if rng.random() < 0.3:
        items.append((f"ghost{rng.randrange(100)}", rng.choice(TYPE_POOL)))
    if rng.random() < 0.3:
        word = rng.choice(instance.text.split()).strip(".,;")
        if word:
            items.append((word, rng.choice(TYPE_POOL)))
    if not items:
        return "NONE"
    return " | ".join(f"{t}->{label}" for t, label in items)


def check_parse_invariants(raw, pred):
    """Structural guarantees parse_generation makes for any input."""
    if pred.is_none:
        assert pred.items == []
    for item in pred.items:
        if pred.task is TaskKind.ED:
            assert item.trigger is not None and item.type_label is not None
        elif pred.task is TaskKind.EI:
            assert item.trigger is not None and item.type_label is None
        else:
            assert item.trigger is None and item.type_label is not None
    assert len(pred.items) == len(set(pred.items))
    assert len(pred.items) <= raw.count("|") + 1
    for issue in pred.diagnostics:
        assert issue.fragment in raw
