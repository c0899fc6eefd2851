"""Fixture corpus and helpers for driving the edm3 CLI as a subprocess.

The runner talks to the toolkit only through files and the command
line, and so do these tests: fixtures are written in the documented
canonical and template formats, then expanded with `edm3 build`.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

# verb -> labels emitted for it; one multi-word and one multi-class entry
VERB_LABELS = {
    "died": ["life.die"],
    "clashed": ["conflict.attack"],
    "met": ["contact.meet"],
    "resigned": ["personnel.endposition"],
    "injured": ["life.injure"],
    "broke out": ["conflict.attack"],
    "addressed": ["contact.speech", "media.statement"],
}


def _mentions(text: str, verb: str) -> list[dict]:
    start = text.index(verb)
    out = []
    for label in VERB_LABELS[verb]:
        etype, _, subtype = label.partition(".")
        out.append(
            {
                "start": start,
                "end": start + len(verb),
                "trigger": verb,
                "type": etype,
                "subtype": subtype or None,
            }
        )
    return out


def write_fixture(tmp_path: Path, n: int = 50) -> tuple[Path, Path]:
    """A canonical corpus of n train rows plus a template file."""
    plain = ["died", "clashed", "met", "resigned", "injured"]
    rows = []
    for i in range(n):
        if i % 10 == 8:
            rows.append(
                {
                    "id": f"r{i}",
                    "text": f"person{i} visited site{i} without incident .",
                    "split": "train",
                    "granularity": "sentence",
                    "mentions": [],
                }
            )
            continue
        if i % 10 == 6:
            verb = "broke out"
        elif i % 10 == 7:
            verb = "addressed"
        else:
            verb = plain[i % len(plain)]
        text = f"person{i} {verb} near site{i} yesterday ."
        rows.append(
            {
                "id": f"r{i}",
                "text": text,
                "split": "train",
                "granularity": "sentence",
                "mentions": _mentions(text, verb),
            }
        )
    canonical = tmp_path / "corpus.jsonl"
    canonical.write_text("".join(json.dumps(r) + "\n" for r in rows), "utf-8")

    templates = tmp_path / "templates.jsonl"
    template_rows = [
        {
            "task": task,
            "tag": task,
            "definition": definition,
            "examples": [{"input": "He fell badly .", "output": output}],
        }
        for task, definition, output in (
            ("EI", "List the event triggers.", "fell"),
            ("EC", "List the event types.", "life.injure"),
            ("ED", "List trigger->type pairs.", "fell->life.injure"),
        )
    ]
    templates.write_text(
        "".join(json.dumps(r) + "\n" for r in template_rows), "utf-8"
    )
    return canonical, templates


def edm3_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "edm3.cli", *args],
        capture_output=True,
        text=True,
    )


def build_examples(canonical: Path, templates: Path, out: Path, *extra: str) -> Path:
    result = edm3_cli(
        "build",
        "--canonical", str(canonical),
        "--templates", str(templates),
        "--out", str(out),
        *extra,
    )
    assert result.returncode == 0, result.stderr
    return out
