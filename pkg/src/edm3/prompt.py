"""Render task inputs in the two prompt variants.

tags prefixes the instance with a short task tag:

    ED: <instance text>

instr prepends a task definition and worked examples:

    Definition: <definition>
    Input: <example input>
    Output: <example output>
    Input: <instance text>
    Output:

The instance text always appears verbatim and last, so rendered inputs
for one template share a fixed prefix. Templates live in data files, one
JSON object per line: {"task", "tag", "definition", "examples":
[{"input", "output"}]}; shipped defaults carry two examples per task,
one news-domain and one biomedical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .parse import parse_generation
from .types import FormatError, TaskKind, ValidationError

VARIANTS = ("tags", "instr")


@dataclass(frozen=True)
class PromptTemplate:
    task: TaskKind
    tag: str
    definition: str
    examples: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.tag:
            raise ValidationError(f"{self.task}: template tag must be non-empty")
        for ex_in, ex_out in self.examples:
            parsed = parse_generation(ex_out, self.task, "<template>")
            if parsed.diagnostics:
                kinds = {str(i.kind) for i in parsed.diagnostics}
                raise ValidationError(
                    f"{self.task}: template example output {ex_out!r} "
                    f"violates the target grammar ({', '.join(sorted(kinds))})"
                )
            if not ex_in:
                raise ValidationError(f"{self.task}: template example input empty")


def render_input(
    instance_text: str,
    task: TaskKind,
    variant: str,
    template: PromptTemplate,
) -> str:
    if template.task is not task:
        raise ValidationError(
            f"template for {template.task} cannot render a {task} input"
        )
    if variant == "tags":
        return f"{template.tag}: {instance_text}"
    if variant == "instr":
        parts = [f"Definition: {template.definition}\n"]
        for ex_in, ex_out in template.examples:
            parts.append(f"Input: {ex_in}\nOutput: {ex_out}\n")
        parts.append(f"Input: {instance_text}\nOutput:")
        return "".join(parts)
    raise ValidationError(f"unknown prompt variant {variant!r}")


def _template_from_dict(obj: dict, where: str) -> PromptTemplate:
    for key in ("task", "tag", "definition", "examples"):
        if key not in obj:
            raise FormatError(f"{where}: template missing field {key!r}")
    try:
        task = TaskKind(obj["task"])
    except ValueError as exc:
        raise FormatError(f"{where}: unknown task {obj['task']!r}") from exc
    try:
        examples = tuple((ex["input"], ex["output"]) for ex in obj["examples"])
        return PromptTemplate(task, obj["tag"], obj["definition"], examples)
    except (ValidationError, KeyError, TypeError) as exc:
        raise FormatError(f"{where}: {exc}") from exc


def load_templates(path: str | Path) -> dict[TaskKind, PromptTemplate]:
    """Read a template file; every task may appear at most once."""
    path = Path(path)
    templates: dict[TaskKind, PromptTemplate] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{where}: invalid JSON: {exc}") from exc
            tpl = _template_from_dict(obj, where)
            if tpl.task in templates:
                raise FormatError(f"{where}: duplicate template for {tpl.task}")
            templates[tpl.task] = tpl
    return templates


def default_templates(corpus_name: str = "default") -> dict[TaskKind, PromptTemplate]:
    """Shipped templates, preferring a corpus-specific file when one exists."""
    base = resources.files("edm3") / "templates"
    candidate = base / f"{corpus_name}.jsonl"
    chosen = candidate if candidate.is_file() else base / "default.jsonl"
    with resources.as_file(chosen) as path:
        return load_templates(path)
