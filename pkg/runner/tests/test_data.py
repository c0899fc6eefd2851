import json

import pytest

from edm3_runner import (
    RunnerError,
    read_corpus,
    read_examples,
    read_templates,
    render_source,
)

from conftest import build_examples, write_fixture


def test_reads_built_examples(tmp_path):
    canonical, templates = write_fixture(tmp_path, n=10)
    out = build_examples(canonical, templates, tmp_path / "ex.jsonl")
    examples = read_examples(out)
    assert len(examples) == 30
    assert {e.task for e in examples} == {"EI", "EC", "ED"}
    assert all(e.split == "train" for e in examples)
    assert any(e.target == "NONE" for e in examples)


def test_examples_missing_field(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"instance_id": "x", "task": "ED", "source": "s", "split": "train"}\n')
    with pytest.raises(RunnerError, match="bad.jsonl:1"):
        read_examples(path)


def test_corpus_reader_takes_documented_fields(tmp_path):
    canonical, _ = write_fixture(tmp_path, n=5)
    rows = read_corpus(canonical)
    assert [r.id for r in rows] == [f"r{i}" for i in range(5)]
    assert all(r.split == "train" for r in rows)


def test_templates_reject_duplicates(tmp_path):
    path = tmp_path / "tpl.jsonl"
    record = {"task": "ED", "tag": "ED", "definition": "d", "examples": []}
    path.write_text(json.dumps(record) + "\n" + json.dumps(record) + "\n")
    with pytest.raises(RunnerError, match="duplicate"):
        read_templates(path)


@pytest.mark.parametrize("variant", ["tags", "instr"])
def test_rendering_matches_builder_output(tmp_path, variant):
    canonical, templates = write_fixture(tmp_path, n=6)
    out = build_examples(
        canonical, templates, tmp_path / "ex.jsonl",
        "--tasks", "ED", "--variant", variant, "--no-shuffle",
    )
    built = read_examples(out)
    rows = {r.id: r for r in read_corpus(canonical)}
    template = read_templates(templates)["ED"]
    for example in built:
        rendered = render_source(rows[example.instance_id].text, variant, template)
        assert rendered == example.source


def test_unknown_variant_rejected(tmp_path):
    _, templates = write_fixture(tmp_path, n=2)
    template = read_templates(templates)["ED"]
    with pytest.raises(RunnerError, match="variant"):
        render_source("text", "zero-shot", template)
