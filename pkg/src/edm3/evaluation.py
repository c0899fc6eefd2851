"""Scoring schemes and corpus statistics.

Six schemes cover the two families the task formats need:

* token_micro / token_macro / token_weighted score per-token label
  assignments after projecting predictions onto text. A token may carry
  several labels (multi-class triggers); counts compare label sets, so
  each gold label is hit or missed independently and each spurious
  predicted label is one false positive.
* multilabel scores instance-level sets of (trigger, type) pairs, with
  the literal NONE pair standing in for an empty set on either side.
  Partial trigger matches do not count.
* mwt_exact_match is the fraction of gold multi-word triggers whose
  exact surface string was predicted for their instance.
* mct_accuracy averages, over gold triggers carrying k >= 2 types, the
  fraction of those types predicted for the same trigger string.

Zero denominators inside a scheme score 0; a scheme with an empty basis
(no instances, no gold multi-word triggers, ...) reports N/A instead of
a fake 0.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from statistics import fmean

from .align import TokenLabeling, gold_labeling, project
from .parse import ParsedPrediction
from .reformulate import NONE_LABEL
from .types import Corpus, Instance, TaskKind, ValidationError


class Scheme(str, Enum):
    TOKEN_MICRO = "token_micro"
    TOKEN_MACRO = "token_macro"
    TOKEN_WEIGHTED = "token_weighted"
    MULTILABEL = "multilabel"
    MWT_EXACT_MATCH = "mwt_exact_match"
    MCT_ACCURACY = "mct_accuracy"

    def __str__(self) -> str:
        return self.value


class Subset(str, Enum):
    ALL = "all"
    POS = "pos"

    def __str__(self) -> str:
        return self.value


NONE_PAIR = (NONE_LABEL, NONE_LABEL)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def _prf(tp: float, fp: float, fn: float) -> tuple[float, float, float]:
    p = _ratio(tp, tp + fp)
    r = _ratio(tp, tp + fn)
    return p, r, _ratio(2 * p * r, p + r)


@dataclass(frozen=True)
class TypeScore:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "TypeScore":
        return cls(tp, fp, fn, *_prf(tp, fp, fn))


@dataclass
class MetricsReport:
    scheme: Scheme
    subset: Subset
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    per_type: dict[str, TypeScore] = field(default_factory=dict)
    accuracy: float | None = None  # only mwt/mct carry a headline accuracy
    denominator: int | None = None
    na: bool = False
    extras: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "scheme": str(self.scheme),
            "subset": str(self.subset),
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": None if self.na else self.precision,
            "recall": None if self.na else self.recall,
            "f1": None if self.na else self.f1,
            "per_type": {
                t: {
                    "tp": s.tp, "fp": s.fp, "fn": s.fn,
                    "precision": s.precision, "recall": s.recall, "f1": s.f1,
                }
                for t, s in sorted(self.per_type.items())
            },
            "na": self.na,
        }
        if self.accuracy is not None or self.na:
            out["accuracy"] = self.accuracy
        if self.denominator is not None:
            out["denominator"] = self.denominator
        if self.extras:
            out["extras"] = dict(self.extras)
        return out


def _na_report(scheme: Scheme, subset: Subset) -> MetricsReport:
    return MetricsReport(scheme, subset, 0, 0, 0, 0.0, 0.0, 0.0, na=True)


def _per_type_counts(
    tp: Counter[str], fp: Counter[str], fn: Counter[str]
) -> dict[str, TypeScore]:
    return {
        t: TypeScore.from_counts(tp[t], fp[t], fn[t])
        for t in set(tp) | set(fp) | set(fn)
    }


def _assemble_token_report(
    scheme: Scheme,
    subset: Subset,
    averaging: str,
    tp: Counter[str],
    fp: Counter[str],
    fn: Counter[str],
) -> MetricsReport:
    per_type = _per_type_counts(tp, fp, fn)
    gtp, gfp, gfn = sum(tp.values()), sum(fp.values()), sum(fn.values())
    if gtp + gfp + gfn == 0:
        return _na_report(scheme, subset)
    if averaging == "micro":
        p, r, f = _prf(gtp, gfp, gfn)
    else:
        # Averaging universe: types with gold support in this subset.
        scored = [s for s in per_type.values() if s.tp + s.fn > 0]
        if not scored:
            return _na_report(scheme, subset)
        if averaging == "macro":
            weights = [1.0] * len(scored)
        else:
            weights = [float(s.tp + s.fn) for s in scored]
        total = sum(weights)
        p = sum(w * s.precision for w, s in zip(weights, scored)) / total
        r = sum(w * s.recall for w, s in zip(weights, scored)) / total
        f = sum(w * s.f1 for w, s in zip(weights, scored)) / total
    return MetricsReport(scheme, subset, gtp, gfp, gfn, p, r, f, per_type=per_type)


_TOKEN_SCHEMES = {
    "micro": Scheme.TOKEN_MICRO,
    "macro": Scheme.TOKEN_MACRO,
    "weighted": Scheme.TOKEN_WEIGHTED,
}


def eval_token_level(
    gold: list[TokenLabeling],
    pred: list[TokenLabeling],
    averaging: str = "micro",
    subset: Subset = Subset.ALL,
) -> MetricsReport:
    """Compare aligned token labelings; gold and pred must pair up 1:1."""
    if averaging not in _TOKEN_SCHEMES:
        raise ValidationError(f"unknown averaging {averaging!r}")
    if len(gold) != len(pred):
        raise ValidationError(f"{len(gold)} gold labelings vs {len(pred)} predicted")
    tp: Counter[str] = Counter()
    fp: Counter[str] = Counter()
    fn: Counter[str] = Counter()
    for g, p in zip(gold, pred):
        if g.instance_id != p.instance_id:
            raise ValidationError(f"instance id mismatch: {g.instance_id} vs {p.instance_id}")
        if len(g.tokens) != len(p.tokens):
            raise ValidationError(f"{g.instance_id}: token count mismatch")
        for gs, ps in zip(g.label_sets, p.label_sets):
            for label in gs & ps:
                tp[label] += 1
            for label in gs - ps:
                fn[label] += 1
            for label in ps - gs:
                fp[label] += 1
    return _assemble_token_report(_TOKEN_SCHEMES[averaging], subset, averaging, tp, fp, fn)


def _pair_up(
    gold: list[Instance], preds: list[ParsedPrediction], task: TaskKind | None = None
) -> list[tuple[Instance, ParsedPrediction]]:
    by_id: dict[str, ParsedPrediction] = {}
    for p in preds:
        if task is not None and p.task is not task:
            continue
        if p.instance_id in by_id:
            raise ValidationError(f"multiple predictions for instance {p.instance_id}")
        by_id[p.instance_id] = p
    missing = [i.id for i in gold if i.id not in by_id]
    if missing:
        raise ValidationError(
            f"missing predictions for {len(missing)} instance(s): "
            + ", ".join(missing[:5])
        )
    return [(i, by_id[i.id]) for i in gold]


def _pred_pairs(p: ParsedPrediction) -> frozenset[tuple[str, str]]:
    pairs = {
        (it.trigger, it.type_label)
        for it in p.items
        if it.trigger is not None and it.type_label is not None
    }
    return frozenset(pairs) if pairs else frozenset({NONE_PAIR})


def _gold_pairs(i: Instance) -> frozenset[tuple[str, str]]:
    pairs = {(m.trigger_text, m.label) for m in i.mentions}
    return frozenset(pairs) if pairs else frozenset({NONE_PAIR})


def _drop_subtypes(pairs: frozenset[tuple[str, str]]) -> set[tuple[str, str]]:
    return {(trig, label.split(".", 1)[0]) for trig, label in pairs}


def eval_multilabel(
    gold: list[Instance],
    preds: list[ParsedPrediction],
    subset: Subset = Subset.ALL,
) -> MetricsReport:
    """Instance-level set comparison of (trigger, type) pairs.

    An empty side contributes the NONE pair, so correct abstentions are
    true positives. A relaxed score that drops subtypes before matching
    rides along in ``extras`` for diagnostics.
    """
    if not gold:
        return _na_report(Scheme.MULTILABEL, subset)
    pairs = _pair_up(gold, preds, task=TaskKind.ED)
    tp: Counter[str] = Counter()
    fp: Counter[str] = Counter()
    fn: Counter[str] = Counter()
    rtp = rfp = rfn = 0
    for inst, pred in pairs:
        g, p = _gold_pairs(inst), _pred_pairs(pred)
        for _, label in g & p:
            tp[label] += 1
        for _, label in p - g:
            fp[label] += 1
        for _, label in g - p:
            fn[label] += 1
        rg, rp = _drop_subtypes(g), _drop_subtypes(p)
        rtp += len(rg & rp)
        rfp += len(rp - rg)
        rfn += len(rg - rp)
    gtp, gfp, gfn = sum(tp.values()), sum(fp.values()), sum(fn.values())
    p_, r_, f_ = _prf(gtp, gfp, gfn)
    rp_, rr_, rf_ = _prf(rtp, rfp, rfn)
    return MetricsReport(
        Scheme.MULTILABEL, subset, gtp, gfp, gfn, p_, r_, f_,
        per_type=_per_type_counts(tp, fp, fn),
        extras={
            "type_only_precision": rp_,
            "type_only_recall": rr_,
            "type_only_f1": rf_,
        },
    )


def eval_mwt(
    gold: list[Instance],
    preds: list[ParsedPrediction],
    subset: Subset = Subset.ALL,
) -> MetricsReport:
    """Exact-match accuracy over gold multi-word trigger strings.

    The unit is a distinct (instance, trigger string) pair whose trigger
    spans several tokens; predicting a fragment of it scores nothing.
    """
    pairs = _pair_up(gold, preds)
    matched = missed = 0
    for inst, pred in pairs:
        predicted = set(pred.trigger_texts)
        for trig in {m.trigger_text for m in inst.mentions if m.is_multiword}:
            if trig in predicted:
                matched += 1
            else:
                missed += 1
    total = matched + missed
    if total == 0:
        return _na_report(Scheme.MWT_EXACT_MATCH, subset)
    p_, r_, f_ = _prf(matched, 0, missed)
    return MetricsReport(
        Scheme.MWT_EXACT_MATCH, subset, matched, 0, missed, p_, r_, f_,
        accuracy=matched / total, denominator=total,
    )


def eval_mct(
    gold: list[Instance],
    preds: list[ParsedPrediction],
    subset: Subset = Subset.ALL,
) -> MetricsReport:
    """Mean per-trigger type recall over gold multi-class triggers.

    A trigger string carrying k >= 2 gold types in one instance scores
    |predicted types for it ∩ gold types| / k.
    """
    pairs = _pair_up(gold, preds, task=TaskKind.ED)
    scores: list[float] = []
    tp = fp = fn = 0
    for inst, pred in pairs:
        gold_types: dict[str, set[str]] = defaultdict(set)
        for m in inst.mentions:
            gold_types[m.trigger_text].add(m.label)
        pred_types: dict[str, set[str]] = defaultdict(set)
        for it in pred.items:
            if it.trigger is not None and it.type_label is not None:
                pred_types[it.trigger].add(it.type_label)
        for trig, types in gold_types.items():
            if len(types) < 2:
                continue
            hit = types & pred_types.get(trig, set())
            scores.append(len(hit) / len(types))
            tp += len(hit)
            fn += len(types - hit)
            fp += len(pred_types.get(trig, set()) - types)
    if not scores:
        return _na_report(Scheme.MCT_ACCURACY, subset)
    p_, r_, f_ = _prf(tp, fp, fn)
    return MetricsReport(
        Scheme.MCT_ACCURACY, subset, tp, fp, fn, p_, r_, f_,
        accuracy=fmean(scores), denominator=len(scores),
    )


def split_pos(
    instances: list[Instance], preds: list[ParsedPrediction]
) -> tuple[tuple[list[Instance], list[ParsedPrediction]], tuple[list[Instance], list[ParsedPrediction]]]:
    """Return ((pos instances, their preds), (all instances, all preds))."""
    pos_ids = {i.id for i in instances if i.is_positive}
    pos = (
        [i for i in instances if i.id in pos_ids],
        [p for p in preds if p.instance_id in pos_ids],
    )
    return pos, (list(instances), list(preds))


_TOKEN_AVERAGING = {
    Scheme.TOKEN_MICRO: "micro",
    Scheme.TOKEN_MACRO: "macro",
    Scheme.TOKEN_WEIGHTED: "weighted",
}


def evaluate_schemes(
    instances: list[Instance],
    preds: list[ParsedPrediction],
    schemes: list[Scheme],
    subset: Subset = Subset.ALL,
    occurrences: str = "all",
) -> dict[Scheme, MetricsReport]:
    """Run the requested schemes over one instance subset."""
    reports: dict[Scheme, MetricsReport] = {}
    token_schemes = [s for s in schemes if s in _TOKEN_AVERAGING]
    if token_schemes:
        if instances:
            pairs = _pair_up(instances, preds, task=TaskKind.ED)
            gold = [gold_labeling(i) for i, _ in pairs]
            projected = [project(p, i.text, occurrences) for i, p in pairs]
        else:
            gold, projected = [], []
        for scheme in token_schemes:
            reports[scheme] = eval_token_level(
                gold, projected, _TOKEN_AVERAGING[scheme], subset=subset
            )
    if Scheme.MULTILABEL in schemes:
        reports[Scheme.MULTILABEL] = eval_multilabel(instances, preds, subset=subset)
    if Scheme.MWT_EXACT_MATCH in schemes:
        reports[Scheme.MWT_EXACT_MATCH] = eval_mwt(instances, preds, subset=subset)
    if Scheme.MCT_ACCURACY in schemes:
        reports[Scheme.MCT_ACCURACY] = eval_mct(instances, preds, subset=subset)
    return reports


def collect_diagnostics(
    instances: list[Instance],
    preds: list[ParsedPrediction],
    occurrences: str = "all",
) -> dict:
    """Counts that contextualize the scores: parse issues by kind,
    hallucinated triggers, and ambiguous (multi-occurrence) triggers."""
    issue_counts: Counter[str] = Counter()
    for p in preds:
        for issue in p.diagnostics:
            issue_counts[str(issue.kind)] += 1
    hallucinations = 0
    ambiguous = 0
    by_id = {p.instance_id: p for p in preds if p.task is TaskKind.ED}
    for inst in instances:
        pred = by_id.get(inst.id)
        if pred is None:
            continue
        labeling = project(pred, inst.text, occurrences)
        hallucinations += len(labeling.hallucinations)
        ambiguous += len(labeling.ambiguous)
    return {
        "predictions": len(preds),
        "abstentions": sum(1 for p in preds if p.is_none),
        "parse_issues": dict(sorted(issue_counts.items())),
        "hallucinated_triggers": hallucinations,
        "ambiguous_triggers": ambiguous,
    }


@dataclass(frozen=True)
class DatasetStats:
    neg_pct: float
    events_per_row_avg: float
    events_per_row_max: int
    types_per_row_avg: float
    types_per_row_max: int
    zs_count: int | None
    mwt_pct_instances: float
    mwt_pct_rows: float
    mct_pct_instances: float
    mct_pct_rows: float

    def to_json_dict(self) -> dict:
        return {
            "neg_pct": self.neg_pct,
            "events_per_row": {"avg": self.events_per_row_avg, "max": self.events_per_row_max},
            "types_per_row": {"avg": self.types_per_row_avg, "max": self.types_per_row_max},
            "zs_count": self.zs_count,
            "mwt": {"pct_instances": self.mwt_pct_instances, "pct_rows": self.mwt_pct_rows},
            "mct": {"pct_instances": self.mct_pct_instances, "pct_rows": self.mct_pct_rows},
        }


def compute_stats(corpus: Corpus) -> DatasetStats:
    """Corpus-wide counts over every split.

    A row is one instance. Events per row counts distinct trigger spans,
    types per row distinct labels. The trigger universe for the
    multi-word and multi-class percentages is distinct (instance, span)
    pairs; a span is multi-class when its trigger string carries >= 2
    labels in that instance. zs_count is None without both train and
    test splits.
    """
    if not corpus.instances:
        raise ValidationError(f"corpus {corpus.name!r} has no instances")
    rows = len(corpus.instances)
    negatives = sum(1 for i in corpus.instances if not i.is_positive)
    events_counts = []
    types_counts = []
    total_spans = 0
    mwt_spans = 0
    mct_spans = 0
    mwt_rows = 0
    mct_rows = 0
    for inst in corpus.instances:
        spans = {(m.start, m.end): m.trigger_text for m in inst.mentions}
        labels_by_trigger: dict[str, set[str]] = defaultdict(set)
        for m in inst.mentions:
            labels_by_trigger[m.trigger_text].add(m.label)
        events_counts.append(len(spans))
        types_counts.append(len({m.label for m in inst.mentions}))
        total_spans += len(spans)
        row_mwt = sum(1 for t in spans.values() if len(t.split()) > 1)
        row_mct = sum(1 for t in spans.values() if len(labels_by_trigger[t]) >= 2)
        mwt_spans += row_mwt
        mct_spans += row_mct
        mwt_rows += 1 if row_mwt else 0
        mct_rows += 1 if row_mct else 0
    train = corpus.split_instances("train")
    test = corpus.split_instances("test")
    zs_count: int | None = None
    if train and test:
        test_types = {m.label for i in test for m in i.mentions}
        zs_count = len(test_types - corpus.type_inventory)
    return DatasetStats(
        neg_pct=100.0 * negatives / rows,
        events_per_row_avg=fmean(events_counts),
        events_per_row_max=max(events_counts),
        types_per_row_avg=fmean(types_counts),
        types_per_row_max=max(types_counts),
        zs_count=zs_count,
        mwt_pct_instances=_ratio(100.0 * mwt_spans, total_spans),
        mwt_pct_rows=100.0 * mwt_rows / rows,
        mct_pct_instances=_ratio(100.0 * mct_spans, total_spans),
        mct_pct_rows=100.0 * mct_rows / rows,
    )
