"""File contracts shared with the edm3 toolkit, re-read here.

The runner deliberately does not import edm3; it speaks the documented
JSON Lines formats instead. Three are read (task examples, canonical
corpus rows, prompt templates) and prompt rendering reproduces the
builder's two layouts byte for byte, which the test suite checks
against actual `edm3 build` output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class RunnerError(ValueError):
    pass


@dataclass(frozen=True)
class Example:
    instance_id: str
    task: str
    source: str
    target: str
    split: str


@dataclass(frozen=True)
class CorpusRow:
    id: str
    text: str
    split: str


@dataclass(frozen=True)
class Template:
    task: str
    tag: str
    definition: str
    examples: tuple[tuple[str, str], ...]


def _rows(path: Path):
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise RunnerError(f"{path}:{lineno}: {exc}") from exc


def read_examples(path: str | Path) -> list[Example]:
    path = Path(path)
    examples = []
    for lineno, obj in _rows(path):
        try:
            examples.append(
                Example(
                    instance_id=obj["instance_id"],
                    task=obj["task"],
                    source=obj["source"],
                    target=obj["target"],
                    split=obj["split"],
                )
            )
        except KeyError as exc:
            raise RunnerError(f"{path}:{lineno}: missing field {exc}") from exc
    return examples


def read_corpus(path: str | Path) -> list[CorpusRow]:
    path = Path(path)
    rows = []
    for lineno, obj in _rows(path):
        try:
            rows.append(CorpusRow(id=obj["id"], text=obj["text"], split=obj["split"]))
        except KeyError as exc:
            raise RunnerError(f"{path}:{lineno}: missing field {exc}") from exc
    return rows


def read_templates(path: str | Path) -> dict[str, Template]:
    path = Path(path)
    templates: dict[str, Template] = {}
    for lineno, obj in _rows(path):
        try:
            template = Template(
                task=obj["task"],
                tag=obj["tag"],
                definition=obj["definition"],
                examples=tuple((e["input"], e["output"]) for e in obj["examples"]),
            )
        except (KeyError, TypeError) as exc:
            raise RunnerError(f"{path}:{lineno}: bad template: {exc}") from exc
        if template.task in templates:
            raise RunnerError(f"{path}:{lineno}: duplicate template for {template.task}")
        templates[template.task] = template
    return templates


def render_source(text: str, variant: str, template: Template) -> str:
    if variant == "tags":
        return f"{template.tag}: {text}"
    if variant == "instr":
        parts = [f"Definition: {template.definition}\n"]
        for example_in, example_out in template.examples:
            parts.append(f"Input: {example_in}\nOutput: {example_out}\n")
        parts.append(f"Input: {text}\nOutput:")
        return "".join(parts)
    raise RunnerError(f"unknown variant {variant!r}")
