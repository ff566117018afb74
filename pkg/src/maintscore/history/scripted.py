"""Build small git repositories with fixed identities and timestamps.

Commit hashes depend only on content, identity and dates, so a script run
twice yields identical repositories.
"""

from __future__ import annotations

import os
import subprocess
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .git import git_executable

EPOCH = datetime(2020, 1, 1, 12, 0, 0, tzinfo=timezone.utc)


class ScriptedRepo:
    def __init__(self, path: Path | str, branch: str = "main") -> None:
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self._run("init", "--quiet", "-b", branch)
        self._run("config", "commit.gpgsign", "false")
        self._run("config", "core.autocrlf", "false")

    def _run(self, *args: str, when: datetime | None = None) -> str:
        env = dict(os.environ)
        env.update({
            "GIT_AUTHOR_NAME": "Fixture", "GIT_AUTHOR_EMAIL": "fixture@example.org",
            "GIT_COMMITTER_NAME": "Fixture", "GIT_COMMITTER_EMAIL": "fixture@example.org",
            "GIT_CONFIG_GLOBAL": os.devnull, "GIT_CONFIG_NOSYSTEM": "1",
        })
        if when is not None:
            stamp = f"{int(when.timestamp())} +0000"
            env["GIT_AUTHOR_DATE"] = stamp
            env["GIT_COMMITTER_DATE"] = stamp
        out = subprocess.run(
            [git_executable(), *args], cwd=self.path, env=env, capture_output=True, text=True, check=True,
        )
        return out.stdout.strip()

    def write(self, relpath: str, text: str) -> None:
        p = self.path / relpath
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")

    def remove(self, relpath: str) -> None:
        self._run("rm", "--quiet", relpath)

    def move(self, src: str, dst: str) -> None:
        (self.path / dst).parent.mkdir(parents=True, exist_ok=True)
        self._run("mv", src, dst)

    def commit(self, message: str, when: datetime | timedelta) -> str:
        """Commit all changes; ``when`` may be an offset from :data:`EPOCH`."""
        if isinstance(when, timedelta):
            when = EPOCH + when
        self._run("add", "-A")
        self._run("commit", "--quiet", "--allow-empty", "-m", message, when=when)
        return self._run("rev-parse", "HEAD")

    def commit_file(self, relpath: str, text: str, message: str, when: datetime | timedelta) -> str:
        self.write(relpath, text)
        return self.commit(message, when)

    def checkout(self, ref: str, new_branch: bool = False) -> None:
        if new_branch:
            self._run("checkout", "--quiet", "-b", ref)
        else:
            self._run("checkout", "--quiet", ref)

    def merge(self, ref: str, message: str, when: datetime | timedelta) -> str:
        if isinstance(when, timedelta):
            when = EPOCH + when
        self._run("merge", "--quiet", "--no-ff", "-m", message, ref, when=when)
        return self._run("rev-parse", "HEAD")

    def bundle(self, dest: Path) -> Path:
        self._run("bundle", "create", str(dest), "--all")
        return dest
