"""Toolkit for event detection as text generation.

Corpora of trigger-annotated instances are reformulated into three
text-to-text tasks (identification, classification, detection),
rendered as tagged or instruction-prompted inputs, and the model's
generations are parsed back into typed trigger spans and scored under
token-level, instance-level pair, multi-word, and multi-class schemes.
"""

from .align import TokenLabeling, gold_labeling, project, tokenize
from .corpus_builder import (
    BuildConfig,
    TaskExample,
    build,
    overlength_ids,
    read_examples,
    write_examples,
)
from .evaluation import (
    DatasetStats,
    MetricsReport,
    Scheme,
    Subset,
    compute_stats,
    eval_mct,
    eval_multilabel,
    eval_mwt,
    eval_token_level,
    evaluate_schemes,
    split_pos,
)
from .ingest import adapt, filter_positive, load_canonical, write_canonical
from .parse import ParsedPrediction, ParseIssue, parse_generation, read_predictions
from .prompt import PromptTemplate, default_templates, load_templates, render_input
from .reformulate import (
    ITEM_SEP,
    NONE_LABEL,
    PAIR_SEP,
    TargetString,
    make_ec_target,
    make_ed_target,
    make_ei_target,
    make_target,
    targets_for,
)
from .types import (
    Corpus,
    EventMention,
    FormatError,
    Instance,
    TaskKind,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "BuildConfig",
    "Corpus",
    "DatasetStats",
    "EventMention",
    "FormatError",
    "ITEM_SEP",
    "Instance",
    "MetricsReport",
    "NONE_LABEL",
    "PAIR_SEP",
    "ParseIssue",
    "ParsedPrediction",
    "PromptTemplate",
    "Scheme",
    "Subset",
    "TargetString",
    "TaskExample",
    "TaskKind",
    "TokenLabeling",
    "ValidationError",
    "adapt",
    "build",
    "compute_stats",
    "default_templates",
    "eval_mct",
    "eval_multilabel",
    "eval_mwt",
    "eval_token_level",
    "evaluate_schemes",
    "filter_positive",
    "gold_labeling",
    "load_canonical",
    "load_templates",
    "make_ec_target",
    "make_ed_target",
    "make_ei_target",
    "make_target",
    "overlength_ids",
    "parse_generation",
    "project",
    "read_examples",
    "read_predictions",
    "render_input",
    "split_pos",
    "targets_for",
    "tokenize",
    "write_canonical",
    "write_examples",
]
