"""Command-line front end: train and predict."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .data import RunnerError
from .runner import ARCHITECTURES, MAX_SOURCE_LENGTHS, RunnerConfig, predict, train

log = logging.getLogger(__name__)


def cmd_train(args: argparse.Namespace) -> int:
    config = RunnerConfig(
        model=args.model,
        max_source_length=args.max_source_length,
        epochs=args.epochs,
        batch_size=args.batch_size,
        lr=args.lr,
        decode=args.decode,
        beam_width=args.beam_width,
        seed=args.seed,
        grad_accumulation=args.grad_accumulation,
    )
    out = train(args.examples, config, args.out)
    print(f"model saved to {out}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    out = predict(
        args.model_dir,
        args.canonical,
        args.task,
        args.variant,
        args.templates,
        args.out,
        split=args.split,
        decode=args.decode,
        beam_width=args.beam_width,
        batch_size=args.batch_size,
    )
    print(f"predictions written to {out}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edm3-runner",
        description="Fine-tune a toy seq2seq model and emit predictions files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train_p = sub.add_parser("train", help="fit the model on a task example file")
    train_p.add_argument("--examples", required=True, help="task example JSON Lines")
    train_p.add_argument("--out", required=True, help="model output directory")
    train_p.add_argument("--model", default="tiny-t5", choices=sorted(ARCHITECTURES))
    train_p.add_argument(
        "--max-source-length", type=int, default=512, choices=MAX_SOURCE_LENGTHS
    )
    train_p.add_argument("--epochs", type=int, default=60)
    train_p.add_argument("--batch-size", type=int, default=10)
    train_p.add_argument("--lr", type=float, default=3e-3)
    train_p.add_argument("--decode", default="greedy", choices=("greedy", "beam"))
    train_p.add_argument("--beam-width", type=int, default=50)
    train_p.add_argument("--seed", type=int, default=0)
    train_p.add_argument("--grad-accumulation", type=int, default=1)
    train_p.set_defaults(func=cmd_train)

    predict_p = sub.add_parser("predict", help="generate a predictions file")
    predict_p.add_argument("--model-dir", required=True)
    predict_p.add_argument("--canonical", required=True, help="canonical corpus JSON Lines")
    predict_p.add_argument("--task", default="ED", choices=("EI", "EC", "ED"))
    predict_p.add_argument("--variant", default="tags", choices=("tags", "instr"))
    predict_p.add_argument("--templates", required=True, help="template JSON Lines")
    predict_p.add_argument("--split", default="test", choices=("train", "dev", "test"))
    predict_p.add_argument("--decode", default=None, choices=("greedy", "beam"))
    predict_p.add_argument("--beam-width", type=int, default=None)
    predict_p.add_argument("--batch-size", type=int, default=16)
    predict_p.add_argument("--out", required=True, help="predictions JSON Lines output")
    predict_p.set_defaults(func=cmd_predict)
    return parser


def _setup_logging() -> None:
    level = os.environ.get("EDM3_LOG", "INFO").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        level = "INFO"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (RunnerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
