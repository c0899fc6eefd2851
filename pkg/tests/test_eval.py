import dataclasses
import random

import pytest

from edm3 import (
    Corpus,
    EventMention,
    Instance,
    Scheme,
    TaskKind,
    ValidationError,
    compute_stats,
    eval_mct,
    eval_multilabel,
    eval_mwt,
    eval_token_level,
    evaluate_schemes,
    gold_labeling,
    make_ed_target,
    parse_generation,
    project,
    split_pos,
)
from conftest import (
    brute_pair_counts,
    brute_token_scores,
    perturb_generation,
    synth_corpus,
    synth_instance,
)


def _ed(generation, instance_id="x"):
    return parse_generation(generation, TaskKind.ED, instance_id)


def _inst(instance_id, text, mentions, split="test"):
    return Instance(id=instance_id, text=text, mentions=tuple(mentions), split=split)


DIED = _inst("a", "He died.", (EventMention("died", 3, 7, "life", "die"),))
FELL = _inst("b", "She fell.", (EventMention("fell", 4, 8, "motion", "fall"),))
QUIET = _inst("q", "Quiet day.", ())


def test_token_identity_scores_one():
    gold = [gold_labeling(DIED)]
    pred = [project(_ed("died->life.die", "a"), DIED.text)]
    for averaging in ("micro", "macro", "weighted"):
        rep = eval_token_level(gold, pred, averaging)
        assert (rep.precision, rep.recall, rep.f1) == (1.0, 1.0, 1.0)


def test_token_all_outside_prediction_scores_zero():
    gold = [gold_labeling(DIED)]
    pred = [project(_ed("NONE", "a"), DIED.text)]
    rep = eval_token_level(gold, pred, "micro")
    assert (rep.precision, rep.recall, rep.f1) == (0.0, 0.0, 0.0)
    assert rep.fn == 1 and rep.tp == 0 and rep.fp == 0


def test_token_micro_frozen_two_instance_fixture():
    # one spurious label on "He", one missed "fell": TP=1, FP=1, FN=1
    gold = [gold_labeling(DIED), gold_labeling(FELL)]
    pred = [
        project(_ed("died->life.die | He->life.die", "a"), DIED.text),
        project(_ed("NONE", "b"), FELL.text),
    ]
    micro = eval_token_level(gold, pred, "micro")
    assert (micro.tp, micro.fp, micro.fn) == (1, 1, 1)
    assert (micro.precision, micro.recall, micro.f1) == (0.5, 0.5, 0.5)
    macro = eval_token_level(gold, pred, "macro")
    assert macro.precision == pytest.approx(0.25)
    assert macro.recall == pytest.approx(0.5)
    assert macro.f1 == pytest.approx(1 / 3)
    weighted = eval_token_level(gold, pred, "weighted")
    assert weighted.f1 == pytest.approx(1 / 3)  # equal gold support per type


def test_token_multiclass_label_sets_counted_per_label():
    inst = _inst(
        "m",
        "She was purchasing food.",
        (
            EventMention("purchasing", 8, 18, "transferownership"),
            EventMention("purchasing", 8, 18, "transfermoney"),
        ),
    )
    gold = [gold_labeling(inst)]
    pred = [project(_ed("purchasing->transferownership", "m"), inst.text)]
    rep = eval_token_level(gold, pred, "micro")
    assert (rep.tp, rep.fp, rep.fn) == (1, 0, 1)


def test_token_level_validates_alignment():
    with pytest.raises(ValidationError):
        eval_token_level([gold_labeling(DIED)], [], "micro")
    with pytest.raises(ValidationError):
        eval_token_level(
            [gold_labeling(DIED)],
            [project(_ed("NONE", "b"), FELL.text)],
            "micro",
        )


def test_token_oracle_equivalence_on_perturbed_predictions():
    rng = random.Random(5)
    instances = [synth_instance(rng, i, split="test") for i in range(60)]
    gold = [gold_labeling(i) for i in instances]
    pred = [
        project(_ed(perturb_generation(rng, i), i.id), i.text) for i in instances
    ]
    expected = brute_token_scores(gold, pred)
    for averaging in ("micro", "macro", "weighted"):
        rep = eval_token_level(gold, pred, averaging)
        exp_p, exp_r, exp_f = expected[averaging]
        assert rep.precision == pytest.approx(exp_p, abs=1e-9)
        assert rep.recall == pytest.approx(exp_r, abs=1e-9)
        assert rep.f1 == pytest.approx(exp_f, abs=1e-9)


def test_multilabel_exact_pair_is_tp():
    rep = eval_multilabel([DIED], [_ed("died->life.die", "a")])
    assert (rep.tp, rep.fp, rep.fn) == (1, 0, 0)
    assert rep.f1 == 1.0


def test_multilabel_none_is_a_label():
    rep = eval_multilabel([QUIET], [_ed("NONE", "q")])
    assert (rep.tp, rep.fp, rep.fn) == (1, 0, 0)
    assert "NONE" in rep.per_type


def test_multilabel_partial_trigger_no_credit():
    inst = _inst(
        "p",
        "The meeting took place today.",
        (EventMention("took place", 12, 22, "process_start"),),
    )
    rep = eval_multilabel([inst], [_ed("place->process_start", "p")])
    assert (rep.tp, rep.fp, rep.fn) == (0, 1, 1)


def test_multilabel_subtype_strict_with_relaxed_extra():
    rep = eval_multilabel([DIED], [_ed("died->life.wrong", "a")])
    assert (rep.tp, rep.fp, rep.fn) == (0, 1, 1)
    assert rep.extras["type_only_f1"] == 1.0


def test_multilabel_missing_prediction_errors():
    with pytest.raises(ValidationError, match="missing predictions"):
        eval_multilabel([DIED, FELL], [_ed("died->life.die", "a")])


def test_multilabel_duplicate_prediction_errors():
    with pytest.raises(ValidationError, match="multiple predictions"):
        eval_multilabel([DIED], [_ed("x->t", "a"), _ed("y->t", "a")])


def test_multilabel_permutation_invariant():
    inst = _inst(
        "perm",
        "Police detained people after clashes.",
        (
            EventMention("detained", 7, 15, "movement", "transportperson"),
            EventMention("clashes", 29, 36, "conflict", "attack"),
        ),
    )
    fwd = "detained->movement.transportperson | clashes->conflict.attack"
    rev = "clashes->conflict.attack | detained->movement.transportperson"
    a = eval_multilabel([inst], [_ed(fwd, "perm")])
    b = eval_multilabel([inst], [_ed(rev, "perm")])
    assert (a.tp, a.fp, a.fn, a.f1) == (b.tp, b.fp, b.fn, b.f1)


def test_multilabel_oracle_equivalence():
    rng = random.Random(9)
    instances = [synth_instance(rng, i, split="test") for i in range(80)]
    preds = [_ed(perturb_generation(rng, i), i.id) for i in instances]
    exp = [0, 0, 0]
    for inst, pred in zip(instances, preds):
        tp, fp, fn = brute_pair_counts(inst, pred.items)
        exp[0] += tp
        exp[1] += fp
        exp[2] += fn
    rep = eval_multilabel(instances, preds)
    assert (rep.tp, rep.fp, rep.fn) == tuple(exp)


def test_multilabel_monotonicity():
    base = eval_multilabel([DIED], [_ed("died->life.die", "a")])
    spurious = eval_multilabel([DIED], [_ed("died->life.die | He->t", "a")])
    assert spurious.precision <= base.precision
    dropped = eval_multilabel([DIED], [_ed("NONE", "a")])
    assert dropped.recall <= base.recall


MWT = _inst(
    "w",
    "The meeting took place today.",
    (EventMention("took place", 12, 22, "process_start"),),
)


def test_mwt_exact_string_required():
    missed = eval_mwt([MWT], [_ed("place->process_start", "w")])
    assert missed.accuracy == 0.0 and missed.denominator == 1
    hit = eval_mwt([MWT], [_ed("took place->process_start", "w")])
    assert hit.accuracy == 1.0 and hit.f1 == 1.0


def test_mwt_ignores_single_word_triggers():
    rep = eval_mwt([DIED], [_ed("died->life.die", "a")])
    assert rep.na and rep.accuracy is None


def test_mct_partial_credit():
    inst = _inst(
        "c",
        "She was purchasing food.",
        (
            EventMention("purchasing", 8, 18, "transferownership"),
            EventMention("purchasing", 8, 18, "transfermoney"),
        ),
    )
    both = eval_mct(
        [inst], [_ed("purchasing->transferownership | purchasing->transfermoney", "c")]
    )
    assert both.accuracy == 1.0
    one = eval_mct([inst], [_ed("purchasing->transferownership", "c")])
    assert one.accuracy == 0.5
    neither = eval_mct([inst], [_ed("purchasing->other", "c")])
    assert neither.accuracy == 0.0


def test_mct_na_without_multiclass_gold():
    rep = eval_mct([DIED], [_ed("died->life.die", "a")])
    assert rep.na


def test_split_pos_on_all_positive_corpus_is_identity():
    preds = [_ed("died->life.die", "a"), _ed("fell->motion.fall", "b")]
    (pos_i, pos_p), (all_i, all_p) = split_pos([DIED, FELL], preds)
    assert pos_i == all_i and pos_p == all_p


def test_split_pos_filters_negatives():
    preds = [_ed("died->life.die", "a"), _ed("NONE", "q")]
    (pos_i, pos_p), _ = split_pos([DIED, QUIET], preds)
    assert [i.id for i in pos_i] == ["a"]
    assert [p.instance_id for p in pos_p] == ["a"]


def test_all_negative_subset_reports_na():
    (pos_i, pos_p), _ = split_pos([QUIET], [_ed("NONE", "q")])
    reports = evaluate_schemes(pos_i, pos_p, list(Scheme))
    assert all(rep.na for rep in reports.values())


def test_pos_subset_complements_neg_pct():
    rng = random.Random(3)
    corpus = synth_corpus(rng, 50)
    stats = compute_stats(corpus)
    instances = list(corpus.instances)
    preds = [_ed(make_ed_target(i).text, i.id) for i in instances]
    (pos_i, _), _ = split_pos(instances, preds)
    negatives = round(stats.neg_pct / 100 * len(instances))
    assert len(pos_i) == len(instances) - negatives


def test_stats_frozen_fixture():
    corpus = Corpus(
        name="tiny",
        instances=(
            _inst(
                "1",
                "Police detained people after clashes.",
                (
                    EventMention("detained", 7, 15, "movement", "transportperson"),
                    EventMention("clashes", 29, 36, "conflict", "attack"),
                ),
                split="train",
            ),
            _inst(
                "2",
                "The meeting took place today.",
                (EventMention("took place", 12, 22, "process_start"),),
                split="train",
            ),
            _inst(
                "3",
                "She was purchasing food.",
                (
                    EventMention("purchasing", 8, 18, "transferownership"),
                    EventMention("purchasing", 8, 18, "transfermoney"),
                ),
                split="test",
            ),
            _inst("4", "Quiet day.", (), split="test"),
        ),
    )
    stats = compute_stats(corpus)
    assert stats.neg_pct == 25.0
    assert stats.events_per_row_avg == 1.0  # spans: 2 + 1 + 1 + 0 over 4 rows
    assert stats.events_per_row_max == 2
    assert stats.types_per_row_avg == 1.25  # labels: 2 + 1 + 2 + 0
    assert stats.types_per_row_max == 2
    # test introduces transferownership and transfermoney, unseen in train
    assert stats.zs_count == 2
    assert stats.mwt_pct_instances == 25.0  # 1 of 4 spans
    assert stats.mwt_pct_rows == 25.0
    assert stats.mct_pct_instances == 25.0
    assert stats.mct_pct_rows == 25.0


def test_stats_zs_none_without_test_split():
    train_only = dataclasses.replace(DIED, split="train")
    stats = compute_stats(Corpus(name="c", instances=(train_only,)))
    assert stats.zs_count is None


def test_stats_empty_corpus_rejected():
    with pytest.raises(ValidationError):
        compute_stats(Corpus(name="empty", instances=()))


def test_stats_match_brute_force_recount():
    rng = random.Random(21)
    corpus = synth_corpus(rng, 100)
    stats = compute_stats(corpus)
    rows = len(corpus.instances)
    neg = sum(1 for i in corpus.instances if not i.mentions)
    span_rows = []
    mwt = mct = mwt_rows = mct_rows = 0
    for inst in corpus.instances:
        spans = sorted({(m.start, m.end) for m in inst.mentions})
        by_text = {}
        for m in inst.mentions:
            by_text.setdefault(m.trigger_text, set()).add(m.label)
        row_mwt = [s for s in spans if " " in inst.text[s[0]:s[1]]]
        row_mct = [
            s for s in spans if len(by_text[inst.text[s[0]:s[1]]]) >= 2
        ]
        span_rows.append(spans)
        mwt += len(row_mwt)
        mct += len(row_mct)
        mwt_rows += bool(row_mwt)
        mct_rows += bool(row_mct)
    total = sum(len(s) for s in span_rows)
    assert stats.neg_pct == 100 * neg / rows
    assert stats.events_per_row_avg == pytest.approx(total / rows)
    assert stats.events_per_row_max == max(len(s) for s in span_rows)
    assert stats.mwt_pct_instances == pytest.approx(100 * mwt / total)
    assert stats.mct_pct_instances == pytest.approx(100 * mct / total)
    assert stats.mwt_pct_rows == pytest.approx(100 * mwt_rows / rows)
    assert stats.mct_pct_rows == pytest.approx(100 * mct_rows / rows)
    train_types = {
        m.label for i in corpus.instances if i.split == "train" for m in i.mentions
    }
    test_types = {
        m.label for i in corpus.instances if i.split == "test" for m in i.mentions
    }
    assert stats.zs_count == len(test_types - train_types)
