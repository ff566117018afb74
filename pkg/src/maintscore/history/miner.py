"""Commit snapshots and baseline sampling."""

from __future__ import annotations

import logging
import random
import shutil
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable

from .git import GitError, MissingObjectError, Repo

log = logging.getLogger(__name__)


class SkipCommit(Exception):
    """A commit cannot be analysed; ``reason`` is recorded in the run report."""

    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class CommitRecord:
    project_url: str
    commit_hash: str
    timestamp: datetime | None = None
    is_merge: bool = False
    label: str | None = None


def commit_record(repo: Repo, project_url: str, commit: str, label: str | None = None) -> CommitRecord:
    return CommitRecord(project_url, commit, repo.author_time(commit), len(repo.parents(commit)) > 1, label)


def materialize(repo: Repo, commit: str, trees_dir: Path) -> Path:
    """Extract the tree of ``commit`` under ``trees_dir/<hash>``; reused if already there."""
    dest = trees_dir / commit
    if dest.is_dir():
        return dest
    tmp = trees_dir / f"{commit}.partial"
    if tmp.exists():
        shutil.rmtree(tmp)
    repo.archive(commit, tmp)
    tmp.rename(dest)
    return dest


def materialize_pair(repo: Repo, commit: str, trees_dir: Path) -> tuple[Path, Path]:
    """Trees of the first parent and of ``commit``.

    Raises :class:`SkipCommit` for root commits and unresolvable revisions.
    """
    try:
        full = repo.rev_parse(commit)
    except MissingObjectError as exc:
        raise SkipCommit(f"missing object: {commit}") from exc
    parents = repo.parents(full)
    if not parents:
        raise SkipCommit(f"root commit {full} has no parent")
    try:
        return materialize(repo, parents[0], trees_dir), materialize(repo, full, trees_dir)
    except GitError as exc:
        raise SkipCommit(f"cannot materialize {full}: {exc}") from exc


def eligible_baseline_commits(repo: Repo, ref: str = "HEAD") -> list[str]:
    """Non-merge, non-root commits on the first-parent chain of ``ref``."""
    return [c for c in repo.first_parent_history(ref) if len(repo.parents(c)) == 1]


def sample_baseline(
    repo: Repo,
    energy_commits: Iterable[str],
    seed: int,
    project_url: str = "",
    ref: str = "HEAD",
) -> list[CommitRecord]:
    """Draw one uniformly random eligible commit per energy commit.

    The generator is seeded from ``seed`` and the project URL only, so the
    sample does not depend on where the clone lives.
    """
    energy = list(energy_commits)
    pool = eligible_baseline_commits(repo, ref)
    if not pool:
        log.warning("%s: no eligible baseline commits", project_url or repo.path)
        return []
    rng = random.Random(f"{seed}|{project_url}")
    return [commit_record(repo, project_url, rng.choice(pool), label="Baseline") for _ in energy]
