"""End-to-end run: clone, profile each commit and its parent, score, track lifespans, test."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import re
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .categories import (
    DatasetRecord,
    apply_min_count_rule,
    category_counts,
    load_alias_table,
    normalize_categories,
    read_dataset,
)
from .config import RunConfig
from .history.git import GitError, GitUnavailable, Repo, clone, run_git
from .history.lifespan import LifespanBin, LifespanRecord, track_lifespan
from .history.miner import SkipCommit, materialize_pair, sample_baseline
from .metrics.profile import analyze_tree, dump_profile
from .scoring import CommitAnalysis, MaintainabilitySnapshot, delta, snapshot_score
from .stats import bin_distribution, effect_summary, ks_two_sample, wilcoxon_signed_rank

log = logging.getLogger(__name__)

SKIPPED_HEADER = ("project", "commit", "stage", "reason")
BASELINE_HEADER = ("project_url", "commit_hash", "category", "energy_commit")


@dataclass
class ProjectResult:
    deltas: list[CommitAnalysis] = field(default_factory=list)
    baseline_deltas: list[CommitAnalysis] = field(default_factory=list)
    lifespans: list[tuple[str, LifespanRecord]] = field(default_factory=list)
    baseline_lifespans: list[tuple[str, LifespanRecord]] = field(default_factory=list)
    baseline_sample: list[tuple[str, str, str, str]] = field(default_factory=list)
    skipped: list[tuple[str, str, str, str]] = field(default_factory=list)
    snapshots: dict[str, tuple[dict, dict]] = field(default_factory=dict)


def _is_remote(url: str) -> bool:
    return "://" in url or re.match(r"^[\w.-]+@[\w.-]+:", url) is not None


def resolve_source(url: str, dataset_dir: Path | None) -> str:
    """Remote URLs pass through; local paths are taken relative to the dataset file."""
    if _is_remote(url):
        return url
    p = Path(url).expanduser()
    if not p.is_absolute() and dataset_dir is not None:
        p = dataset_dir / p
    return str(p.resolve())


def project_slug(source: str) -> str:
    stem = re.sub(r"[^A-Za-z0-9]+", "_", source.rstrip("/").split("/")[-1]).strip("_") or "repo"
    return f"{stem}-{hashlib.sha1(source.encode()).hexdigest()[:10]}"


class ProjectAnalyzer:
    """Scores commits of one cloned project, memoizing per-commit snapshots."""

    def __init__(self, repo: Repo, config: RunConfig, trees_dir: Path, project: str = "") -> None:
        self.repo = repo
        self.config = config
        self.trees_dir = trees_dir
        self.project = project
        self._cache: dict[str, tuple[dict, MaintainabilitySnapshot]] = {}

    def snapshot(self, commit: str, tree: Path) -> tuple[dict, MaintainabilitySnapshot]:
        if commit not in self._cache:
            analysis = analyze_tree(tree, self.config)
            snap = snapshot_score(
                analysis.profiles, self.config.guidelines, self.config.selected, self.config.aggregate, commit,
            )
            self._cache[commit] = (analysis.to_json(), snap)
        return self._cache[commit]

    def documents(self, commit: str) -> tuple[dict, dict]:
        """(profile.json, snapshot.json) documents of an already scored commit."""
        profile_doc, snap = self._cache[commit]
        return profile_doc, snap.to_json()

    def commit_delta(self, commit: str, category: str = "") -> CommitAnalysis:
        before_tree, after_tree = materialize_pair(self.repo, commit, self.trees_dir)
        full = after_tree.name
        parent = before_tree.name
        _, before = self.snapshot(parent, before_tree)
        _, after = self.snapshot(full, after_tree)
        return delta(before, after, self.project, category, self.config.epsilon)


def _analyze_project(
    project: str,
    records: list[DatasetRecord],
    config: RunConfig,
    dataset_dir: Path | None,
    with_baseline: bool = True,
    with_deltas: bool = True,
    with_lifespan: bool = True,
) -> ProjectResult:
    result = ProjectResult()
    source = resolve_source(project, dataset_dir)
    clone_dir = config.cache_dir / "repos" / project_slug(source)
    try:
        repo = clone(source, clone_dir)
    except GitUnavailable:
        raise
    except (GitError, OSError) as exc:
        reason = f"clone failed: {exc}".replace("\n", " ")
        result.skipped.extend((project, r.commit_hash, "clone", reason) for r in records)
        return result
    analyzer = ProjectAnalyzer(repo, config, config.cache_dir / "trees" / project_slug(source), project)

    def process(commit: str, category: str, deltas: list, lifespans: list) -> str | None:
        try:
            full = repo.rev_parse(commit)
        except GitError:
            result.skipped.append((project, commit, "resolve", f"missing object: {commit}"))
            return None
        if with_deltas:
            try:
                cd = analyzer.commit_delta(full, category)
                deltas.append(cd)
                for c in (cd.parent, cd.commit):
                    result.snapshots[c] = analyzer.documents(c)
            except SkipCommit as exc:
                result.skipped.append((project, full, "delta", exc.reason))
            except (GitError, OSError, ValueError) as exc:
                result.skipped.append((project, full, "delta", str(exc).replace("\n", " ")))
        if with_lifespan:
            try:
                lifespans.append((project, track_lifespan(repo, full)))
            except (GitError, OSError) as exc:
                result.skipped.append((project, full, "lifespan", str(exc).replace("\n", " ")))
        return full

    resolved: list[tuple[str, DatasetRecord]] = []
    for rec in records:
        cat = rec.category.value if rec.category else ""
        full = process(rec.commit_hash, cat, result.deltas, result.lifespans)
        if full is not None:
            resolved.append((full, rec))

    if with_baseline and resolved:
        try:
            sample = sample_baseline(repo, [h for h, _ in resolved], config.seed, project)
        except GitError as exc:
            result.skipped.append((project, "", "baseline", str(exc).replace("\n", " ")))
            sample = []
        for picked, (energy, rec) in zip(sample, resolved):
            cat = rec.category.value if rec.category else ""
            result.baseline_sample.append((project, picked.commit_hash, cat, energy))
            process(picked.commit_hash, cat, result.baseline_deltas, result.baseline_lifespans)
    return result


def prepare_records(config: RunConfig, records: list[DatasetRecord] | None = None) -> list[DatasetRecord]:
    if records is None:
        if config.dataset is None:
            raise ValueError("no dataset given")
        records = read_dataset(config.dataset)
    records = normalize_categories(records, load_alias_table())
    return apply_min_count_rule(records, config.min_category_count)


def analyze_records(config: RunConfig, records: list[DatasetRecord], **stages: bool) -> ProjectResult:
    """Run the per-project work and merge results in dataset order."""
    by_project: dict[str, list[DatasetRecord]] = {}
    for r in records:
        by_project.setdefault(r.project_url, []).append(r)
    dataset_dir = config.dataset.resolve().parent if config.dataset else None
    projects = list(by_project)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(
            lambda p: _analyze_project(p, by_project[p], config, dataset_dir, **stages), projects,
        ))
    merged = ProjectResult()
    for res in results:
        merged.deltas.extend(res.deltas)
        merged.baseline_deltas.extend(res.baseline_deltas)
        merged.lifespans.extend(res.lifespans)
        merged.baseline_lifespans.extend(res.baseline_lifespans)
        merged.baseline_sample.extend(res.baseline_sample)
        merged.skipped.extend(res.skipped)
        merged.snapshots.update(res.snapshots)
    return merged


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_delta_csv(path: Path, rows: list[CommitAnalysis]) -> None:
    path.write_text(csv_text(CommitAnalysis.CSV_HEADER, [r.csv_row() for r in rows]), encoding="utf-8")


def write_lifespan_csv(path: Path, rows: list[tuple[str, LifespanRecord]]) -> None:
    path.write_text(csv_text(LifespanRecord.CSV_HEADER, [r.csv_row(p) for p, r in rows]), encoding="utf-8")


def _read_csv(path: Path) -> list[dict[str, str]]:
    if not path.exists():
        return []
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _group_entry(values: list[float], config: RunConfig) -> dict:
    if not values:
        return {
            "n": 0, "mean": None, "median": None,
            "percent_decrease": None, "percent_unchanged": None, "percent_increase": None,
            "test": "wilcoxon", "statistic": None, "p": None, "significant": None,
        }
    entry = effect_summary(values, config.epsilon).as_dict()
    res = wilcoxon_signed_rank(values, config.alpha, config.zero_method)
    entry.update({
        "test": "wilcoxon",
        "statistic": res.statistic,
        "p": res.p_value,
        "significant": res.significant,
        "method": res.method,
        "degenerate": res.degenerate,
    })
    return entry


def _lifespan_values(rows: list[dict[str, str]]) -> list[float]:
    # Never-changed commits are the longest-lived; +inf keeps them at the top of the order.
    return [float(r["lifespan_seconds"]) if r["lifespan_seconds"] else math.inf for r in rows]


def _bins(rows: list[dict[str, str]]) -> dict:
    return bin_distribution(
        LifespanRecord(
            r["commit"],
            r["refactoring_commit"] or None,
            int(r["lifespan_seconds"]) if r["lifespan_seconds"] else None,
            LifespanBin(r["bin"]),
        )
        for r in rows
    )


def compute_stats(run_dir: Path, config: RunConfig) -> dict:
    """Statistics document for a run directory's CSV reports."""
    energy = _read_csv(run_dir / "delta.csv")
    baseline = _read_csv(run_dir / "baseline_delta.csv")
    groups = {
        "energy": _group_entry([float(r["delta"]) for r in energy], config),
        "baseline": _group_entry([float(r["delta"]) for r in baseline], config),
    }
    for cat in sorted({r["category"] for r in energy}):
        groups[f"category:{cat}"] = _group_entry([float(r["delta"]) for r in energy if r["category"] == cat], config)

    life_e = _read_csv(run_dir / "lifespan.csv")
    life_b = _read_csv(run_dir / "baseline_lifespan.csv")
    ks = None
    if life_e and life_b:
        res = ks_two_sample(_lifespan_values(life_e), _lifespan_values(life_b), config.alpha)
        ks = {"test": "ks", "statistic": res.statistic, "p": res.p_value, "n": res.n, "m": res.m,
              "significant": res.significant}
    return {
        "alpha": config.alpha,
        "groups": groups,
        "lifespan": {"energy": _bins(life_e), "baseline": _bins(life_b), "test": ks},
    }


def write_stats(run_dir: Path, config: RunConfig) -> dict:
    doc = compute_stats(run_dir, config)
    (run_dir / "stats.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return doc


def run_pipeline(config: RunConfig, out_dir: Path, records: list[DatasetRecord] | None = None) -> ProjectResult:
    """Mine every dataset record and write the run directory.

    Per-commit failures are recorded in ``skipped.csv``; they never abort the run.
    """
    records = prepare_records(config, records)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = datetime.now(timezone.utc)
    result = analyze_records(config, records)

    write_delta_csv(out_dir / "delta.csv", result.deltas)
    write_delta_csv(out_dir / "baseline_delta.csv", result.baseline_deltas)
    write_lifespan_csv(out_dir / "lifespan.csv", result.lifespans)
    write_lifespan_csv(out_dir / "baseline_lifespan.csv", result.baseline_lifespans)
    (out_dir / "baseline.csv").write_text(csv_text(BASELINE_HEADER, result.baseline_sample), encoding="utf-8")
    (out_dir / "skipped.csv").write_text(csv_text(SKIPPED_HEADER, result.skipped), encoding="utf-8")
    (out_dir / "categories.json").write_text(json.dumps(category_counts(records), indent=2) + "\n", encoding="utf-8")
    snap_root = out_dir / "snapshots"
    for commit, (profile_doc, snap_doc) in sorted(result.snapshots.items()):
        d = snap_root / commit
        d.mkdir(parents=True, exist_ok=True)
        (d / "profile.json").write_text(dump_profile(profile_doc), encoding="utf-8")
        (d / "snapshot.json").write_text(json.dumps(snap_doc, indent=2) + "\n", encoding="utf-8")
    write_stats(out_dir, config)

    manifest = {
        "tool_version": __version__,
        "started": started.isoformat(),
        "finished": datetime.now(timezone.utc).isoformat(),
        "git": _git_version(),
        "seed": config.seed,
        "records": len(records),
        "skipped": len(result.skipped),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return result


def _git_version() -> str:
    try:
        return str(run_git(["--version"])).strip()
    except (GitError, GitUnavailable):
        return "unknown"


def single_commit_delta(repo_path: Path, commit: str, config: RunConfig, category: str = "", project: str = "") -> CommitAnalysis:
    repo = Repo(repo_path)
    with tempfile.TemporaryDirectory(prefix="maintscore-") as tmp:
        analyzer = ProjectAnalyzer(repo, config, Path(tmp), project or str(repo_path))
        return analyzer.commit_delta(commit, category)
