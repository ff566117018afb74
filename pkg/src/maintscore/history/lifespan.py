"""Lifespan of a commit: time until a later commit first edits one of its lines."""

from __future__ import annotations

import difflib
import enum
import logging
from dataclasses import dataclass

from ..metrics.lexer import normalize_line
from .git import GitError, Repo

log = logging.getLogger(__name__)

HOUR = 3600
DAY = 24 * HOUR
WEEK = 7 * DAY


class LifespanBin(str, enum.Enum):
    UP_TO_1H = "0-1h"
    UP_TO_1D = "1h-1d"
    UP_TO_1W = "1d-1w"
    UP_TO_4W = "1w-4w"
    UP_TO_1Y = "4w-1y"
    OVER_1Y = ">1y"
    NOT_CHANGED = "NotChanged"


# Half-open upper bounds [lo, hi) in seconds.
_BIN_EDGES = (
    (HOUR, LifespanBin.UP_TO_1H),
    (DAY, LifespanBin.UP_TO_1D),
    (WEEK, LifespanBin.UP_TO_1W),
    (4 * WEEK, LifespanBin.UP_TO_4W),
    (365 * DAY, LifespanBin.UP_TO_1Y),
)


def bin_lifespan(seconds: float | None) -> LifespanBin:
    if seconds is None:
        return LifespanBin.NOT_CHANGED
    if seconds < 0:
        raise ValueError(f"lifespan must be non-negative, got {seconds}")
    for edge, b in _BIN_EDGES:
        if seconds < edge:
            return b
    return LifespanBin.OVER_1Y


@dataclass(frozen=True)
class LifespanRecord:
    commit: str
    refactoring_commit: str | None
    lifespan_seconds: int | None
    bin: LifespanBin

    def __post_init__(self) -> None:
        absent = self.refactoring_commit is None
        if absent != (self.lifespan_seconds is None) or absent != (self.bin is LifespanBin.NOT_CHANGED):
            raise ValueError(f"inconsistent lifespan record: {self}")

    CSV_HEADER = ("project", "commit", "refactoring_commit", "lifespan_seconds", "bin")

    def csv_row(self, project: str) -> list[str]:
        return [
            project,
            self.commit,
            self.refactoring_commit or "",
            "" if self.lifespan_seconds is None else str(self.lifespan_seconds),
            self.bin.value,
        ]


class LifespanError(GitError):
    """History cannot be walked from the commit to the head."""


Tracked = dict[str, set[int]]


def _norm(lines: list[str]) -> list[str]:
    return [normalize_line(x) for x in lines]


def _matcher(old: list[str], new: list[str]) -> difflib.SequenceMatcher:
    return difflib.SequenceMatcher(None, _norm(old), _norm(new), autojunk=False)


def introduced_lines(repo: Repo, parent: str | None, commit: str) -> Tracked:
    """0-based indices of non-blank post-image lines added or modified by ``commit``."""
    tracked: Tracked = {}
    for ch in repo.diff_tree(parent, commit):
        if ch.new_path is None:
            continue
        new = repo.file_lines(commit, ch.new_path)
        if new is None:
            continue
        if ch.status == "A" or ch.old_path is None or parent is None:
            old: list[str] = []
        else:
            old = repo.file_lines(parent, ch.old_path) or []
        norm_new = _norm(new)
        lines: set[int] = set()
        for tag, _i1, _i2, j1, j2 in _matcher(old, new).get_opcodes():
            if tag in ("insert", "replace"):
                lines.update(j for j in range(j1, j2) if norm_new[j])
        if lines:
            tracked[ch.new_path] = lines
    return tracked


def advance(repo: Repo, cur: str, child: str, tracked: Tracked) -> tuple[Tracked, bool]:
    """Carry tracked lines from ``cur`` to ``child``. Returns (new tracking, touched?)."""
    out: Tracked = {}
    handled: set[str] = set()
    for ch in repo.diff_tree(cur, child):
        if ch.old_path is None or ch.old_path not in tracked:
            continue
        lines = tracked[ch.old_path]
        handled.add(ch.old_path)
        if ch.new_path is None:
            return out, True  # file deleted
        old = repo.file_lines(cur, ch.old_path)
        new = repo.file_lines(child, ch.new_path)
        if old is None or new is None:
            return out, True
        moved: set[int] = set()
        for tag, i1, i2, j1, _j2 in _matcher(old, new).get_opcodes():
            if tag == "equal":
                moved.update(j1 + (i - i1) for i in range(i1, i2) if i in lines)
            elif tag in ("delete", "replace") and any(i in lines for i in range(i1, i2)):
                return out, True
        if moved:
            out.setdefault(ch.new_path, set()).update(moved)
    for path, lines in tracked.items():
        if path not in handled:
            out.setdefault(path, set()).update(lines)
    return out, False


def descent_chain(repo: Repo, commit: str, head: str = "HEAD") -> list[str]:
    """Descendants of ``commit`` up to ``head``, following the mainline.

    From a commit on the first-parent chain of ``head`` the chain is simply
    the rest of that chain. From a side-branch commit we walk forward along
    the branch until it merges into the mainline.
    """
    head = repo.rev_parse(head)
    if not repo.is_ancestor(commit, head):
        raise LifespanError(f"{commit} is not an ancestor of {head}")
    mainline = repo.first_parent_history(head)
    position = {c: k for k, c in enumerate(mainline)}
    if commit in position:
        return mainline[position[commit] + 1:]
    ancestry = repo.ancestry_path(commit, head)
    children: dict[str, list[str]] = {}
    for c in ancestry:
        for p in repo.parents(c):
            children.setdefault(p, []).append(c)
    chain: list[str] = []
    cur = commit
    while cur not in position:
        kids = children.get(cur)
        if not kids:
            raise LifespanError(f"no path from {commit} to {head}")
        merged = [k for k in kids if k in position]
        own = [k for k in kids if repo.parents(k)[0] == cur]
        cur = (merged or own or kids)[0]
        chain.append(cur)
    return chain + mainline[position[cur] + 1:]


def track_lifespan(repo: Repo, commit: str, head: str = "HEAD") -> LifespanRecord:
    """Find the first later commit that edits or deletes a line ``commit`` introduced."""
    commit = repo.rev_parse(commit)
    parents = repo.parents(commit)
    tracked = introduced_lines(repo, parents[0] if parents else None, commit)
    not_changed = LifespanRecord(commit, None, None, LifespanBin.NOT_CHANGED)
    if not tracked:
        return not_changed
    cur = commit
    for child in descent_chain(repo, commit, head):
        tracked, touched = advance(repo, cur, child, tracked)
        if touched:
            gap = repo.author_timestamp(child) - repo.author_timestamp(commit)
            if gap < 0:
                log.warning("negative lifespan %ss for %s -> %s (clock skew); clamped to 0", gap, commit[:12], child[:12])
                gap = 0
            return LifespanRecord(commit, child, gap, bin_lifespan(gap))
        if not tracked:
            break
        cur = child
    return not_changed
