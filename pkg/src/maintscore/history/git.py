"""Thin subprocess wrapper around the ``git`` executable."""

from __future__ import annotations

import io
import os
import shutil
import subprocess
import tarfile
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path


class GitError(RuntimeError):
    """A git command failed."""


class GitUnavailable(EnvironmentError):
    """The git executable is missing. Maps to CLI exit code 2."""


class MissingObjectError(GitError):
    """A revision does not resolve in the repository."""


def git_executable() -> str:
    exe = shutil.which("git")
    if exe is None:
        raise GitUnavailable("git executable not found on PATH")
    return exe


def run_git(args: list[str], cwd: Path | None = None, binary: bool = False) -> str | bytes:
    proc = subprocess.run(
        [git_executable(), *args],
        cwd=cwd,
        capture_output=True,
        env=_quiet_env(),
    )
    if proc.returncode != 0:
        err = proc.stderr.decode("utf-8", "replace").strip()
        raise GitError(f"git {' '.join(args)}: {err}")
    return proc.stdout if binary else proc.stdout.decode("utf-8", "replace")


def _quiet_env() -> dict[str, str]:
    env = dict(os.environ)
    env.setdefault("GIT_TERMINAL_PROMPT", "0")
    env["LC_ALL"] = "C"
    return env


@dataclass(frozen=True)
class FileChange:
    status: str  # single letter: A, M, D, R, T, C
    old_path: str | None
    new_path: str | None


class Repo:
    def __init__(self, path: Path | str) -> None:
        self.path = Path(path)
        self._meta: dict[str, tuple[tuple[str, ...], int]] = {}

    def git(self, *args: str) -> str:
        return run_git(list(args), cwd=self.path)  # type: ignore[return-value]

    def git_bytes(self, *args: str) -> bytes:
        return run_git(list(args), cwd=self.path, binary=True)  # type: ignore[return-value]

    def rev_parse(self, rev: str) -> str:
        try:
            return self.git("rev-parse", "--verify", "--quiet", f"{rev}^{{commit}}").strip()
        except GitError as exc:
            raise MissingObjectError(f"{rev} does not resolve in {self.path}") from exc

    def _load_meta(self, commit: str) -> tuple[tuple[str, ...], int]:
        if commit not in self._meta:
            out = self.git("show", "-s", "--format=%P%x00%at", commit).strip()
            parents, ts = out.split("\x00")
            self._meta[commit] = (tuple(parents.split()), int(ts))
        return self._meta[commit]

    def parents(self, commit: str) -> tuple[str, ...]:
        return self._load_meta(commit)[0]

    def author_timestamp(self, commit: str) -> int:
        return self._load_meta(commit)[1]

    def author_time(self, commit: str) -> datetime:
        return datetime.fromtimestamp(self.author_timestamp(commit), tz=timezone.utc)

    def first_parent_history(self, ref: str = "HEAD") -> list[str]:
        """Commits on the first-parent chain of ``ref``, oldest first."""
        out = self.git("log", "--first-parent", "--reverse", "--format=%H%x00%P%x00%at", ref)
        commits = []
        for line in out.splitlines():
            h, parents, ts = line.split("\x00")
            self._meta.setdefault(h, (tuple(parents.split()), int(ts)))
            commits.append(h)
        return commits

    def ancestry_path(self, start: str, end: str) -> list[str]:
        """Commits that are descendants of ``start`` and ancestors of ``end``, topologically ordered."""
        out = self.git("rev-list", "--ancestry-path", "--topo-order", "--reverse", "--parents", f"{start}..{end}")
        commits = []
        for line in out.splitlines():
            h, *parents = line.split()
            commits.append(h)
            if h not in self._meta:
                self._load_meta(h)
        return commits

    def is_ancestor(self, a: str, b: str) -> bool:
        proc = subprocess.run(
            [git_executable(), "merge-base", "--is-ancestor", a, b],
            cwd=self.path, capture_output=True, env=_quiet_env(),
        )
        return proc.returncode == 0

    def diff_tree(self, a: str | None, b: str) -> list[FileChange]:
        """Changed paths between two commits with rename detection. ``a=None`` means the empty tree."""
        if a is None:
            raw = self.git("diff-tree", "-r", "--root", "--no-commit-id", "--name-status", "-z", "-M", b)
        else:
            raw = self.git("diff-tree", "-r", "--name-status", "-z", "-M", a, b)
        fields = raw.split("\x00")
        changes: list[FileChange] = []
        k = 0
        while k < len(fields) and fields[k]:
            status = fields[k][0]
            if status in ("R", "C"):
                changes.append(FileChange(status, fields[k + 1], fields[k + 2]))
                k += 3
            else:
                path = fields[k + 1]
                if status == "A":
                    changes.append(FileChange(status, None, path))
                elif status == "D":
                    changes.append(FileChange(status, path, None))
                else:
                    changes.append(FileChange(status, path, path))
                k += 2
        return changes

    def read_blob(self, commit: str, path: str) -> bytes:
        return _read_blob(self.path, commit, path)

    def file_lines(self, commit: str, path: str) -> list[str] | None:
        """Text lines of ``path`` at ``commit``; None for binary content."""
        data = self.read_blob(commit, path)
        if b"\x00" in data[:8000]:
            return None
        return data.decode("utf-8", "replace").splitlines()

    def archive(self, commit: str, dest: Path) -> Path:
        """Write the tree of ``commit`` into ``dest``."""
        data = self.git_bytes("archive", "--format=tar", commit)
        dest.mkdir(parents=True, exist_ok=True)
        with tarfile.open(fileobj=io.BytesIO(data)) as tar:
            members = [m for m in tar.getmembers() if m.isfile() or m.isdir()]
            if hasattr(tarfile, "data_filter"):
                tar.extractall(dest, members=members, filter="data")
            else:
                tar.extractall(dest, members=members)
        return dest


@lru_cache(maxsize=4096)
def _read_blob(repo: Path, commit: str, path: str) -> bytes:
    return run_git(["cat-file", "blob", f"{commit}:{path}"], cwd=repo, binary=True)  # type: ignore[return-value]


def clone(url: str, dest: Path) -> Repo:
    """Clone ``url`` into ``dest`` unless a clone already exists there."""
    if (dest / ".git").exists() or (dest / "HEAD").exists():
        return Repo(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_name(dest.name + ".partial")
    if tmp.exists():
        shutil.rmtree(tmp)
    run_git(["clone", "--quiet", "--no-checkout", url, str(tmp)])
    tmp.rename(dest)
    return Repo(dest)
