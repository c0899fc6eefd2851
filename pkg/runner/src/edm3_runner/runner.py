"""Train a toy encoder-decoder on task examples and write predictions.

No pretrained checkpoints are bundled; the model names select small
randomly initialized T5 architectures, enough to overfit a fixture and
exercise the full generate-parse-score loop. Training runs single
process on CPU or one device, and prediction writes its output file
atomically (temp file, then rename).
"""

from __future__ import annotations

import json
import logging
import os
import random
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from transformers import T5Config, T5ForConditionalGeneration

from .data import RunnerError, read_corpus, read_examples, read_templates, render_source
from .vocab import EOS, PAD, WordVocab

log = logging.getLogger(__name__)

# name -> (d_model, d_ff, layers, heads)
ARCHITECTURES = {
    "tiny-t5": (128, 256, 2, 4),
    "mini-t5": (64, 128, 1, 2),
}

MAX_SOURCE_LENGTHS = (512, 1024)
MAX_NEW_TOKENS = 128


@dataclass(frozen=True)
class RunnerConfig:
    model: str = "tiny-t5"
    max_source_length: int = 512
    epochs: int = 60
    batch_size: int = 10
    lr: float = 3e-3
    decode: str = "greedy"
    beam_width: int = 50
    seed: int = 0
    grad_accumulation: int = 1

    def __post_init__(self) -> None:
        if self.model not in ARCHITECTURES:
            known = ", ".join(sorted(ARCHITECTURES))
            raise RunnerError(f"unknown model {self.model!r}; available: {known}")
        if self.max_source_length not in MAX_SOURCE_LENGTHS:
            raise RunnerError(
                f"max_source_length must be one of {MAX_SOURCE_LENGTHS}, "
                f"got {self.max_source_length}"
            )
        if self.epochs < 1 or self.batch_size < 1 or self.grad_accumulation < 1:
            raise RunnerError("epochs, batch_size and grad_accumulation must be >= 1")
        if self.decode not in ("greedy", "beam"):
            raise RunnerError(f"decode must be greedy or beam, got {self.decode!r}")
        if self.beam_width < 1:
            raise RunnerError(f"beam_width must be >= 1, got {self.beam_width}")


def build_model(config: RunnerConfig, vocab_size: int) -> T5ForConditionalGeneration:
    d_model, d_ff, layers, heads = ARCHITECTURES[config.model]
    t5_config = T5Config(
        vocab_size=vocab_size,
        d_model=d_model,
        d_ff=d_ff,
        d_kv=d_model // heads,
        num_layers=layers,
        num_heads=heads,
        pad_token_id=PAD,
        eos_token_id=EOS,
        decoder_start_token_id=PAD,
    )
    return T5ForConditionalGeneration(t5_config)


def _pad_batch(rows: list[list[int]], fill: int) -> torch.Tensor:
    width = max(len(r) for r in rows)
    return torch.tensor([r + [fill] * (width - len(r)) for r in rows])


def _encode_sources(
    vocab: WordVocab, sources: list[str], max_length: int
) -> tuple[list[list[int]], list[int]]:
    encoded = []
    truncated = []
    for i, text in enumerate(sources):
        ids, cut = vocab.encode(text, max_length)
        encoded.append(ids)
        if cut:
            truncated.append(i)
    return encoded, truncated


def save_artifacts(
    model: T5ForConditionalGeneration,
    vocab: WordVocab,
    config: RunnerConfig,
    out_dir: Path,
    epoch_loss: list[float],
) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "model.pt")
    vocab.save(out_dir / "vocab.json")
    (out_dir / "config.json").write_text(json.dumps(asdict(config), indent=2), "utf-8")
    (out_dir / "training_log.json").write_text(
        json.dumps({"epoch_loss": epoch_loss}, indent=2), "utf-8"
    )
    return out_dir


def load_artifacts(model_dir: str | Path) -> tuple[T5ForConditionalGeneration, WordVocab, RunnerConfig]:
    model_dir = Path(model_dir)
    for name in ("model.pt", "vocab.json", "config.json"):
        if not (model_dir / name).exists():
            raise RunnerError(f"{model_dir} is not a model directory (missing {name})")
    config = RunnerConfig(**json.loads((model_dir / "config.json").read_text("utf-8")))
    vocab = WordVocab.load(model_dir / "vocab.json")
    model = build_model(config, len(vocab))
    model.load_state_dict(torch.load(model_dir / "model.pt", weights_only=True))
    model.eval()
    return model, vocab, config


def train(examples_path: str | Path, config: RunnerConfig, out_dir: str | Path) -> Path:
    """Fit the toy model on the train split of a task example file."""
    examples = [e for e in read_examples(examples_path) if e.split == "train"]
    if not examples:
        raise RunnerError(f"{examples_path}: no train examples, nothing to fit")
    random.Random(config.seed).shuffle(examples)
    torch.manual_seed(config.seed)

    vocab = WordVocab.from_texts(
        [e.source for e in examples] + [e.target for e in examples]
    )
    sources, truncated = _encode_sources(
        vocab, [e.source for e in examples], config.max_source_length
    )
    if truncated:
        log.warning(
            "%d train source(s) truncated to %d tokens: %s",
            len(truncated),
            config.max_source_length,
            ", ".join(examples[i].instance_id for i in truncated[:5]),
        )
    targets = [vocab.encode(e.target)[0] for e in examples]

    model = build_model(config, len(vocab))
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr)
    # Annealing to ~0 keeps long memorization runs from oscillating.
    batches_per_epoch = (len(examples) + config.batch_size - 1) // config.batch_size
    updates_per_epoch = (
        batches_per_epoch + config.grad_accumulation - 1
    ) // config.grad_accumulation
    scheduler = torch.optim.lr_scheduler.CosineAnnealingLR(
        optimizer, T_max=max(1, config.epochs * updates_per_epoch)
    )
    epoch_loss: list[float] = []
    order = list(range(len(examples)))
    shuffler = random.Random(config.seed + 1)
    for epoch in range(config.epochs):
        shuffler.shuffle(order)
        total = 0.0
        steps = 0
        optimizer.zero_grad()
        for b in range(0, len(order), config.batch_size):
            batch = order[b : b + config.batch_size]
            input_ids = _pad_batch([sources[i] for i in batch], PAD)
            attention = (input_ids != PAD).long()
            labels = _pad_batch([targets[i] for i in batch], -100)
            loss = model(
                input_ids=input_ids, attention_mask=attention, labels=labels
            ).loss
            (loss / config.grad_accumulation).backward()
            steps += 1
            if steps % config.grad_accumulation == 0:
                optimizer.step()
                scheduler.step()
                optimizer.zero_grad()
            total += loss.item()
        if steps % config.grad_accumulation:
            optimizer.step()
            scheduler.step()
            optimizer.zero_grad()
        epoch_loss.append(total / steps)
        log.info("epoch %d/%d loss %.4f", epoch + 1, config.epochs, epoch_loss[-1])
    model.eval()
    return save_artifacts(model, vocab, config, Path(out_dir), epoch_loss)


def _generate(
    model: T5ForConditionalGeneration,
    input_ids: torch.Tensor,
    attention: torch.Tensor,
    decode: str,
    beam_width: int,
) -> torch.Tensor:
    beams = beam_width if decode == "beam" else 1
    with torch.no_grad():
        return model.generate(
            input_ids=input_ids,
            attention_mask=attention,
            max_new_tokens=MAX_NEW_TOKENS,
            num_beams=beams,
            do_sample=False,
            early_stopping=beams > 1,
        )


def predict(
    model_dir: str | Path,
    canonical_path: str | Path,
    task: str,
    variant: str,
    templates_path: str | Path,
    out_path: str | Path,
    split: str = "test",
    decode: str | None = None,
    beam_width: int | None = None,
    batch_size: int = 16,
) -> Path:
    """One generation per instance of the split, written atomically."""
    model, vocab, config = load_artifacts(model_dir)
    decode = decode or config.decode
    beam_width = beam_width or config.beam_width
    if decode not in ("greedy", "beam"):
        raise RunnerError(f"decode must be greedy or beam, got {decode!r}")
    templates = read_templates(templates_path)
    if task not in templates:
        raise RunnerError(f"{templates_path}: no template for task {task!r}")
    rows = [r for r in read_corpus(canonical_path) if r.split == split]
    if not rows:
        raise RunnerError(f"{canonical_path}: no instances in split {split!r}")

    sources = [render_source(r.text, variant, templates[task]) for r in rows]
    encoded, truncated = _encode_sources(vocab, sources, config.max_source_length)
    if truncated:
        log.warning(
            "%d source(s) truncated: %s",
            len(truncated),
            ", ".join(rows[i].id for i in truncated[:5]),
        )

    generations: list[str] = []
    for b in range(0, len(encoded), batch_size):
        chunk = encoded[b : b + batch_size]
        input_ids = _pad_batch(chunk, PAD)
        attention = (input_ids != PAD).long()
        try:
            out = _generate(model, input_ids, attention, decode, beam_width)
            generations.extend(vocab.decode(seq.tolist()[1:]) for seq in out)
        except RuntimeError as exc:
            log.warning(
                "generation failed for %s: %s; writing empty generations",
                ", ".join(r.id for r in rows[b : b + batch_size]),
                exc,
            )
            generations.extend("" for _ in chunk)

    out_path = Path(out_path)
    fd, tmp_name = tempfile.mkstemp(
        dir=out_path.parent or Path("."), suffix=".tmp", text=True
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for row, generation in zip(rows, generations):
                record = {"instance_id": row.id, "task": task, "generation": generation}
                fh.write(json.dumps(record, ensure_ascii=False))
                fh.write("\n")
        os.replace(tmp_name, out_path)
    except BaseException:
        os.unlink(tmp_name)
        raise
    return out_path
