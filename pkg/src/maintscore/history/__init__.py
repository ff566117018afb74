from .git import FileChange, GitError, GitUnavailable, MissingObjectError, Repo, clone
from .lifespan import LifespanBin, LifespanRecord, bin_lifespan, track_lifespan
from .miner import CommitRecord, SkipCommit, materialize_pair, sample_baseline
from .scripted import ScriptedRepo

__all__ = [
    "CommitRecord",
    "FileChange",
    "GitError",
    "GitUnavailable",
    "LifespanBin",
    "LifespanRecord",
    "MissingObjectError",
    "Repo",
    "ScriptedRepo",
    "SkipCommit",
    "bin_lifespan",
    "clone",
    "materialize_pair",
    "sample_baseline",
    "track_lifespan",
]
