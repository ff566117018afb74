"""Command-line entry point.

Exit codes: 0 run completed (per-commit skips included), 1 configuration
error, 2 environment error (git missing, unwritable output, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import CACHE_ENV_VAR, ConfigError, load_config, parse_guidelines
from .history.git import GitError, GitUnavailable
from .history.miner import SkipCommit
from .metrics.profile import analyze_tree, dump_profile
from .pipeline import (
    BASELINE_HEADER,
    SKIPPED_HEADER,
    analyze_records,
    csv_text,
    prepare_records,
    run_pipeline,
    single_commit_delta,
    write_lifespan_csv,
    write_stats,
)
from .scoring import CommitAnalysis, snapshot_score

log = logging.getLogger("maintscore")

EXIT_OK, EXIT_CONFIG, EXIT_ENV = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="INI config file (see README)")
    p.add_argument("--cache-dir", type=Path, help=f"clone cache directory (env: {CACHE_ENV_VAR})")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--aggregate", choices=("sum", "mean"))
    p.add_argument("--guidelines", help="comma-separated guideline selection")
    p.add_argument("--language", choices=("jvm", "java", "kotlin"))
    p.add_argument("--min-clone-length", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maintscore", description="Maintainability deltas of commits")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="risk profiles and score of a source directory")
    p.add_argument("directory", type=Path)
    p.add_argument("--out", type=Path, help="write profile.json and snapshot.json here")
    _common(p)

    p = sub.add_parser("delta", help="score change of one commit against its first parent")
    p.add_argument("repo", type=Path)
    p.add_argument("commit")
    p.add_argument("--category", default="")
    _common(p)

    p = sub.add_parser("mine", help="full pipeline over a dataset CSV")
    p.add_argument("dataset", type=Path)
    p.add_argument("--out", type=Path, default=Path("run"))
    _common(p)

    p = sub.add_parser("baseline", help="sample one baseline commit per energy commit")
    p.add_argument("dataset", type=Path)
    p.add_argument("--out", type=Path, help="CSV output (default: stdout)")
    _common(p)

    p = sub.add_parser("lifespan", help="lifespan of every dataset commit")
    p.add_argument("dataset", type=Path)
    p.add_argument("--out", type=Path, default=Path("lifespan.csv"))
    _common(p)

    p = sub.add_parser("stats", help="recompute stats.json from a run directory")
    p.add_argument("run_dir", type=Path)
    _common(p)
    return parser


def _config(args: argparse.Namespace, dataset: Path | None = None):
    return load_config(
        args.config,
        dataset=dataset,
        cache_dir=args.cache_dir,
        seed=args.seed,
        workers=args.workers,
        aggregate=args.aggregate,
        selected=parse_guidelines(args.guidelines) if args.guidelines else None,
        language=args.language,
        min_clone_length=args.min_clone_length,
    )


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def cmd_analyze(args) -> int:
    cfg = _config(args)
    if not args.directory.is_dir():
        raise ConfigError(f"{args.directory} is not a directory")
    analysis = analyze_tree(args.directory, cfg)
    snap = snapshot_score(analysis.profiles, cfg.guidelines, cfg.selected, cfg.aggregate, commit=str(args.directory))
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "profile.json").write_text(dump_profile(analysis.to_json()), encoding="utf-8")
        (args.out / "snapshot.json").write_text(json.dumps(snap.to_json(), indent=2) + "\n", encoding="utf-8")
    else:
        print(json.dumps({"profile": analysis.to_json(), "snapshot": snap.to_json()}, indent=2))
    return EXIT_OK


def cmd_delta(args) -> int:
    cfg = _config(args)
    try:
        cd = single_commit_delta(args.repo, args.commit, cfg, args.category)
    except SkipCommit as exc:
        print(f"skipped: {exc.reason}", file=sys.stderr)
        return EXIT_OK
    sys.stdout.write(csv_text(CommitAnalysis.CSV_HEADER, [cd.csv_row()]))
    return EXIT_OK


def cmd_mine(args) -> int:
    cfg = _config(args, args.dataset)
    result = run_pipeline(cfg, args.out)
    print(f"{len(result.deltas)} energy deltas, {len(result.baseline_deltas)} baseline deltas, "
          f"{len(result.skipped)} skipped -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_baseline(args) -> int:
    cfg = _config(args, args.dataset)
    result = analyze_records(cfg, prepare_records(cfg), with_deltas=False, with_lifespan=False)
    _write(args.out, csv_text(BASELINE_HEADER, result.baseline_sample))
    if result.skipped:
        sys.stderr.write(csv_text(SKIPPED_HEADER, result.skipped))
    return EXIT_OK


def cmd_lifespan(args) -> int:
    cfg = _config(args, args.dataset)
    result = analyze_records(cfg, prepare_records(cfg), with_deltas=False, with_baseline=False)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_lifespan_csv(args.out, result.lifespans)
    if result.skipped:
        sys.stderr.write(csv_text(SKIPPED_HEADER, result.skipped))
    return EXIT_OK


def cmd_stats(args) -> int:
    cfg = _config(args)
    if not args.run_dir.is_dir():
        raise ConfigError(f"{args.run_dir} is not a run directory")
    print(json.dumps(write_stats(args.run_dir, cfg), indent=2))
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "delta": cmd_delta,
    "mine": cmd_mine,
    "baseline": cmd_baseline,
    "lifespan": cmd_lifespan,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GitUnavailable, GitError, OSError) as exc:
        print(f"environment error: {exc}", file=sys.stderr)
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
