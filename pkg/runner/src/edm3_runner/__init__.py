"""Toy seq2seq runner for the edm3 generative event-detection pipeline.

Trains a small randomly initialized encoder-decoder on a task example
file and writes predictions in the JSON Lines format the edm3 evaluator
consumes. Interoperates with edm3 purely through its file contracts.
"""

from .data import (
    CorpusRow,
    Example,
    RunnerError,
    Template,
    read_corpus,
    read_examples,
    read_templates,
    render_source,
)
from .runner import RunnerConfig, load_artifacts, predict, train
from .vocab import WordVocab

__version__ = "0.1.0"

__all__ = [
    "CorpusRow",
    "Example",
    "RunnerConfig",
    "RunnerError",
    "Template",
    "WordVocab",
    "load_artifacts",
    "predict",
    "read_corpus",
    "read_examples",
    "read_templates",
    "render_source",
    "train",
]
