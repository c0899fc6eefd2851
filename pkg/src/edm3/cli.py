"""Command-line front end.

Four subcommands: convert (native layout -> canonical corpus), stats
(corpus statistics), build (task-formatted example files), evaluate
(score a predictions file). Every run writes a manifest next to its
output recording the resolved options, sha256 digests of the inputs,
the tool version, and a timestamp. Outputs themselves depend only on
inputs and flags, so reruns are byte-identical.

Exit codes: 0 success, 1 user or data error, 2 internal error. Set
EDM3_LOG to DEBUG/INFO/WARNING/ERROR to control log verbosity.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .corpus_builder import BuildConfig, build, overlength_ids, write_examples
from .evaluation import (
    MetricsReport,
    Scheme,
    Subset,
    collect_diagnostics,
    compute_stats,
    evaluate_schemes,
    split_pos,
)
from .ingest import adapt, load_canonical, write_canonical
from .parse import read_predictions
from .prompt import default_templates, load_templates
from .types import FormatError, TaskKind, ValidationError

log = logging.getLogger(__name__)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _digest_tree(path: Path) -> dict[str, str]:
    if path.is_file():
        return {str(path): _sha256(path)}
    return {str(p): _sha256(p) for p in sorted(path.rglob("*")) if p.is_file()}


def _write_manifest(
    command: str,
    args: argparse.Namespace,
    inputs: list[Path],
    extra: dict | None = None,
) -> None:
    out = Path(args.out)
    options = {
        k: str(v) if isinstance(v, Path) else v
        for k, v in vars(args).items()
        if k != "func"
    }
    options.update(extra or {})
    manifest = {
        "command": command,
        "options": options,
        "input_digests": {k: v for p in inputs for k, v in _digest_tree(p).items()},
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path = out.with_name(out.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")


def cmd_convert(args: argparse.Namespace) -> int:
    corpus = adapt(args.input, args.format)
    write_canonical(corpus, args.out)
    _write_manifest("convert", args, [Path(args.input)])
    counts = {s: len(corpus.split_instances(s)) for s in ("train", "dev", "test")}
    print(
        f"{corpus.name}: {len(corpus)} instance(s) "
        f"(train {counts['train']}, dev {counts['dev']}, test {counts['test']}) "
        f"-> {args.out}"
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = load_canonical(args.canonical)
    for split in ("train", "test"):
        if not corpus.split_instances(split):
            log.warning("%s: no %s split; some statistics will be partial", args.canonical, split)
    stats = compute_stats(corpus)
    payload = json.dumps(stats.to_json_dict(), indent=2, sort_keys=True) + "\n"
    Path(args.out).write_text(payload, "utf-8")
    _write_manifest("stats", args, [Path(args.canonical)])
    print(payload, end="")
    return 0


def cmd_build(args: argparse.Namespace) -> int:
    corpus = load_canonical(args.canonical)
    config = BuildConfig(
        tasks=tuple(_parse_tasks(args.tasks)),
        variant=args.variant,
        positive_only=args.positive_only,
        seed=args.seed,
        shuffle=not args.no_shuffle,
        eval_all_tasks=args.eval_all_tasks,
    )
    templates = (
        load_templates(args.templates)
        if args.templates
        else default_templates(corpus.name)
    )
    examples = build(corpus, config, templates)
    write_examples(examples, args.out)
    inputs = [Path(args.canonical)] + ([Path(args.templates)] if args.templates else [])
    _write_manifest(
        "build", args, inputs,
        extra={"overlength": len(overlength_ids(corpus, examples))},
    )
    by_split = {s: sum(1 for e in examples if e.split == s) for s in ("train", "dev", "test")}
    print(
        f"{len(examples)} example(s) "
        f"(train {by_split['train']}, dev {by_split['dev']}, test {by_split['test']}) "
        f"-> {args.out}"
    )
    return 0


def _parse_tasks(raw: str) -> list[TaskKind]:
    tasks = []
    for name in raw.split(","):
        name = name.strip()
        try:
            tasks.append(TaskKind(name))
        except ValueError:
            raise ValidationError(
                f"unknown task {name!r}; expected a comma list of EI, EC, ED"
            ) from None
    return tasks


def _parse_schemes(raw: str) -> list[Scheme]:
    if raw == "all":
        return list(Scheme)
    schemes = []
    for name in raw.split(","):
        name = name.strip()
        try:
            schemes.append(Scheme(name))
        except ValueError:
            known = ", ".join(s.value for s in Scheme)
            raise ValidationError(f"unknown scheme {name!r}; known: {known}") from None
    return schemes


def _format_cell(value: float | None, na: bool) -> str:
    if na:
        return "N/A"
    if value is None:
        return "-"
    return f"{value:.4f}"


def render_table(reports: list[MetricsReport]) -> str:
    header = f"{'scheme':<18}{'subset':<8}{'P':>8}{'R':>8}{'F1':>8}{'acc':>8}"
    lines = [header, "-" * len(header)]
    for rep in reports:
        lines.append(
            f"{str(rep.scheme):<18}{str(rep.subset):<8}"
            f"{_format_cell(rep.precision, rep.na):>8}"
            f"{_format_cell(rep.recall, rep.na):>8}"
            f"{_format_cell(rep.f1, rep.na):>8}"
            f"{_format_cell(rep.accuracy, rep.na):>8}"
        )
    return "\n".join(lines)


def cmd_evaluate(args: argparse.Namespace) -> int:
    corpus = load_canonical(args.canonical)
    instances = list(
        corpus.instances
        if args.split == "all"
        else corpus.split_instances(args.split)
    )
    all_preds = read_predictions(args.predictions)
    preds = [p for p in all_preds if p.task is TaskKind.ED]
    skipped = len(all_preds) - len(preds)
    if skipped:
        log.warning("ignored %d non-ED prediction(s); scoring is over ED", skipped)
    known_ids = {i.id for i in instances}
    extra = sum(1 for p in preds if p.instance_id not in known_ids)
    if extra:
        log.warning("ignored %d prediction(s) for instances outside this split", extra)
        preds = [p for p in preds if p.instance_id in known_ids]
    schemes = _parse_schemes(args.schemes)
    subsets = [Subset.ALL, Subset.POS] if args.subset == "both" else [Subset(args.subset)]
    (pos_inst, pos_preds), (all_inst, all_preds_kept) = split_pos(instances, preds)
    per_subset = {
        Subset.ALL: (all_inst, all_preds_kept),
        Subset.POS: (pos_inst, pos_preds),
    }
    reports: list[MetricsReport] = []
    scheme_block: dict[str, dict[str, dict]] = {}
    for subset in subsets:
        inst, prd = per_subset[subset]
        for scheme, rep in evaluate_schemes(
            inst, prd, schemes, subset=subset, occurrences=args.occurrences
        ).items():
            reports.append(rep)
            scheme_block.setdefault(str(scheme), {})[str(subset)] = rep.to_json_dict()
    diagnostics = collect_diagnostics(instances, preds, occurrences=args.occurrences)
    diagnostics["skipped_non_ed_predictions"] = skipped
    report = {
        "schemes": scheme_block,
        "diagnostics": diagnostics,
        "stats": compute_stats(corpus).to_json_dict(),
    }
    Path(args.out).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    _write_manifest("evaluate", args, [Path(args.canonical), Path(args.predictions)])
    print(render_table(reports))
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edm3",
        description="Convert, build, and score generative event-detection corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="native dataset layout -> canonical corpus")
    convert.add_argument("--input", required=True, help="native file or directory")
    convert.add_argument(
        "--format",
        required=True,
        choices=("rams", "wikievents", "maven", "mlee-standoff"),
        help="native layout name",
    )
    convert.add_argument("--out", required=True, help="canonical JSON Lines output")
    convert.set_defaults(func=cmd_convert)

    stats = sub.add_parser("stats", help="corpus statistics")
    stats.add_argument("--canonical", required=True)
    stats.add_argument("--out", required=True, help="statistics JSON output")
    stats.set_defaults(func=cmd_stats)

    build_p = sub.add_parser("build", help="expand a corpus into task examples")
    build_p.add_argument("--canonical", required=True)
    build_p.add_argument("--tasks", default="EI,EC,ED", help="comma list of EI, EC, ED")
    build_p.add_argument("--variant", default="tags", choices=("tags", "instr"))
    build_p.add_argument("--templates", help="template file; defaults to shipped templates")
    build_p.add_argument("--positive-only", action="store_true")
    build_p.add_argument("--seed", type=int, default=0)
    build_p.add_argument("--no-shuffle", action="store_true")
    build_p.add_argument(
        "--eval-all-tasks",
        action="store_true",
        help="emit every configured task for dev/test too (diagnostics)",
    )
    build_p.add_argument("--out", required=True, help="task example JSON Lines output")
    build_p.set_defaults(func=cmd_build)

    evaluate = sub.add_parser("evaluate", help="score a predictions file")
    evaluate.add_argument("--canonical", required=True)
    evaluate.add_argument("--predictions", required=True)
    evaluate.add_argument(
        "--schemes", default="all", help="comma list of scheme names, or 'all'"
    )
    evaluate.add_argument("--subset", default="both", choices=("all", "pos", "both"))
    evaluate.add_argument(
        "--split",
        default="all",
        choices=("train", "dev", "test", "all"),
        help="score only instances from this split",
    )
    evaluate.add_argument("--occurrences", default="all", choices=("all", "first"))
    evaluate.add_argument("--out", required=True, help="report JSON output")
    evaluate.set_defaults(func=cmd_evaluate)
    return parser


def _setup_logging() -> None:
    level = os.environ.get("EDM3_LOG", "WARNING").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
