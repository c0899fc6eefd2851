import random
import re

import pytest
from hypothesis import given, strategies as st

from edm3 import (
    EventMention,
    Instance,
    TaskKind,
    ValidationError,
    gold_labeling,
    make_ed_target,
    parse_generation,
    project,
    tokenize,
)
from conftest import synth_instance


def test_tokenize_splits_trailing_punctuation():
    tokens = tokenize("He died.")
    assert [(t.text, t.start, t.end) for t in tokens] == [
        ("He", 0, 2),
        ("died", 3, 7),
        (".", 7, 8),
    ]


def test_tokenize_empty_text():
    assert tokenize("") == []


def test_tokenize_multiword_phrase():
    assert [t.text for t in tokenize("took place")] == ["took", "place"]


def test_tokenize_peels_nested_punctuation():
    assert [t.text for t in tokenize('(He said "stop!")')] == [
        "(", "He", "said", '"', "stop", "!", '"', ")",
    ]


def test_tokenize_keeps_internal_punctuation():
    assert [t.text for t in tokenize("a state-of-the-art 3.5 don't")] == [
        "a", "state-of-the-art", "3.5", "don't",
    ]


def test_tokenize_offsets_are_exact():
    text = "  spaced\tout,  text!  "
    for tok in tokenize(text):
        assert text[tok.start:tok.end] == tok.text


def _ed(generation, instance_id="x"):
    return parse_generation(generation, TaskKind.ED, instance_id)


def test_project_labels_matching_token():
    text = "Police detained several people."
    labeling = project(_ed("detained->movement.transportperson"), text)
    by_token = dict(zip([t.text for t in labeling.tokens], labeling.label_sets))
    assert by_token["detained"] == {"movement.transportperson"}
    assert by_token["Police"] == set()
    assert not labeling.hallucinations


def test_project_counts_hallucination():
    labeling = project(_ed("vanished->life.die"), "Nothing here.")
    assert all(s == frozenset() for s in labeling.label_sets)
    assert labeling.hallucinations == ["vanished"]


def test_project_requires_case_exact_match():
    labeling = project(_ed("Detained->t"), "he detained them")
    assert labeling.hallucinations == ["Detained"]


def test_project_rejects_substring_inside_word():
    labeling = project(_ed("ache->symptom"), "a headache today")
    assert labeling.hallucinations == ["ache"]
    assert all(s == frozenset() for s in labeling.label_sets)


def test_project_labels_all_occurrences_and_flags_ambiguity():
    text = "He died before she died."
    labeling = project(_ed("died->life.die"), text)
    labeled = [t.text for t, s in zip(labeling.tokens, labeling.label_sets) if s]
    assert labeled == ["died", "died"]
    assert labeling.ambiguous == ["died"]
    assert not labeling.hallucinations


def test_project_first_occurrence_switch():
    text = "He died before she died."
    labeling = project(_ed("died->life.die"), text, occurrences="first")
    labeled = [
        (t.text, t.start) for t, s in zip(labeling.tokens, labeling.label_sets) if s
    ]
    assert labeled == [("died", 3)]
    assert labeling.ambiguous == ["died"]


def test_project_multiword_covers_every_token():
    text = "The meeting took place today."
    labeling = project(_ed("took place->process"), text)
    labeled = [t.text for t, s in zip(labeling.tokens, labeling.label_sets) if s]
    assert labeled == ["took", "place"]


def test_project_multiclass_union_on_token():
    text = "She was purchasing food."
    labeling = project(
        _ed("purchasing->transferownership | purchasing->transfermoney"), text
    )
    by_token = dict(zip([t.text for t in labeling.tokens], labeling.label_sets))
    assert by_token["purchasing"] == {"transferownership", "transfermoney"}


def test_project_refuses_non_ed_prediction():
    pred = parse_generation("died", TaskKind.EI, "x")
    with pytest.raises(ValidationError):
        project(pred, "He died.")


def test_project_against_brute_force_matcher():
    rng = random.Random(11)
    words = ["died", "he", "she", "fell", "x.y", "die"]
    for _ in range(300):
        text = " ".join(rng.choice(words) for _ in range(rng.randrange(1, 12)))
        trigger = rng.choice(words)
        labeling = project(_ed(f"{trigger}->t"), text)
        tokens = tokenize(text)
        expected = [set() for _ in tokens]
        starts = {t.start for t in tokens}
        ends = {t.end for t in tokens}
        found = False
        for m in re.finditer(re.escape(trigger), text):
            if m.start() in starts and m.end() in ends:
                found = True
                for i, tok in enumerate(tokens):
                    if tok.start >= m.start() and tok.end <= m.end():
                        expected[i].add("t")
        assert [set(s) for s in labeling.label_sets] == expected
        assert bool(labeling.hallucinations) == (not found)


def test_gold_labeling_from_offsets():
    inst = Instance(
        id="x",
        text="Police detained people after clashes.",
        mentions=(
            EventMention("detained", 7, 15, "movement", "transportperson"),
            EventMention("clashes", 29, 36, "conflict", "attack"),
        ),
        split="test",
    )
    labeling = gold_labeling(inst)
    by_token = dict(zip([t.text for t in labeling.tokens], labeling.label_sets))
    assert by_token["detained"] == {"movement.transportperson"}
    assert by_token["clashes"] == {"conflict.attack"}
    assert by_token["Police"] == set()


def test_gold_labeling_negative_instance_all_outside():
    inst = Instance(id="x", text="Quiet day.", mentions=(), split="test")
    assert all(s == frozenset() for s in gold_labeling(inst).label_sets)


def test_gold_labeling_multiword_spans_three_tokens():
    text = "They had been in touch recently."
    inst = Instance(
        id="x",
        text=text,
        mentions=(EventMention("been in touch", 9, 22, "contact", "contact"),),
        split="test",
    )
    labeling = gold_labeling(inst)
    labeled = [t.text for t, s in zip(labeling.tokens, labeling.label_sets) if s]
    assert labeled == ["been", "in", "touch"]
    assert all(s == {"contact.contact"} for s in labeling.label_sets if s)


@given(seed=st.integers(0, 2**32 - 1), idx=st.integers(0, 10**6))
def test_projected_round_trip_matches_gold(seed, idx):
    inst = synth_instance(random.Random(seed), idx)
    pred = parse_generation(make_ed_target(inst).text, TaskKind.ED, inst.id)
    projected = project(pred, inst.text)
    gold = gold_labeling(inst)
    assert projected.label_sets == gold.label_sets
    assert not projected.hallucinations
