"""Expand a corpus into task-formatted text-to-text examples.

Train instances emit one example per configured task (1:1:1 mixing);
dev and test instances emit only the detection task, since that is what
gets scored, unless eval_all_tasks asks for diagnostics. positive_only
drops negative instances from every split before expansion; scoring-time
negative handling belongs to the evaluation subsets, not the builder.

Inputs longer than the working sequence length (512 words for sentence
instances, 1024 for windows, whitespace-counted as a proxy) are flagged,
never truncated; truncation is the trainer's job.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path

from .ingest import filter_positive
from .prompt import VARIANTS, PromptTemplate, render_input
from .reformulate import make_target
from .types import SPLITS, Corpus, FormatError, Instance, TaskKind, ValidationError

log = logging.getLogger(__name__)

LENGTH_LIMITS = {"sentence": 512, "window": 1024}


@dataclass(frozen=True)
class TaskExample:
    instance_id: str
    task: TaskKind
    source: str
    target: str
    split: str

    def __post_init__(self) -> None:
        if not self.source:
            raise ValidationError(f"{self.instance_id}: empty source")
        if self.split not in SPLITS:
            raise ValidationError(f"{self.instance_id}: unknown split {self.split!r}")


@dataclass(frozen=True)
class BuildConfig:
    tasks: tuple[TaskKind, ...]
    variant: str = "tags"
    positive_only: bool = False
    seed: int = 0
    shuffle: bool = True
    eval_all_tasks: bool = False

    def __post_init__(self) -> None:
        if not self.tasks:
            raise ValidationError("config.tasks must be non-empty")
        if len(set(self.tasks)) != len(self.tasks):
            raise ValidationError(f"duplicate tasks in {self.tasks}")
        if self.variant not in VARIANTS:
            raise ValidationError(f"unknown variant {self.variant!r}")


def _tasks_for(instance: Instance, config: BuildConfig) -> tuple[TaskKind, ...]:
    if instance.split == "train" or config.eval_all_tasks:
        return config.tasks
    return (TaskKind.ED,)


def build(
    corpus: Corpus,
    config: BuildConfig,
    templates: dict[TaskKind, PromptTemplate],
) -> list[TaskExample]:
    """One TaskExample per (instance, applicable task), optionally shuffled."""
    if config.positive_only:
        corpus = filter_positive(corpus)
    examples: list[TaskExample] = []
    for instance in corpus.instances:
        for task in _tasks_for(instance, config):
            if task not in templates:
                raise ValidationError(
                    f"no template for task {task} "
                    f"(needed by {instance.split} instance {instance.id})"
                )
            examples.append(
                TaskExample(
                    instance_id=instance.id,
                    task=task,
                    source=render_input(
                        instance.text, task, config.variant, templates[task]
                    ),
                    target=make_target(instance, task).text,
                    split=instance.split,
                )
            )
    over = overlength_ids(corpus, examples)
    if over:
        log.warning(
            "%d example(s) exceed the working sequence length; first: %s",
            len(over),
            over[0],
        )
    if config.shuffle:
        random.Random(config.seed).shuffle(examples)
    return examples


def overlength_ids(corpus: Corpus, examples: list[TaskExample]) -> list[str]:
    """Ids of examples whose source exceeds the granularity's word budget."""
    granularity = {i.id: i.granularity for i in corpus.instances}
    flagged = []
    for ex in examples:
        limit = LENGTH_LIMITS[granularity[ex.instance_id]]
        if len(ex.source.split()) > limit:
            flagged.append(f"{ex.instance_id}/{ex.task}")
    return flagged


def write_examples(examples: list[TaskExample], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for ex in examples:
            record = {
                "instance_id": ex.instance_id,
                "task": str(ex.task),
                "source": ex.source,
                "target": ex.target,
                "split": ex.split,
            }
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")


def read_examples(path: str | Path) -> list[TaskExample]:
    """Inverse of write_examples, with per-line error context."""
    path = Path(path)
    examples = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
                examples.append(
                    TaskExample(
                        instance_id=obj["instance_id"],
                        task=TaskKind(obj["task"]),
                        source=obj["source"],
                        target=obj["target"],
                        split=obj["split"],
                    )
                )
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise FormatError(f"{where}: {exc}") from exc
    return examples
