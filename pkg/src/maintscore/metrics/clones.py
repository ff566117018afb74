"""Exact clone detection over normalized code lines."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..config import Guideline, Level
from .lexer import normalize_line
from .risk import RiskProfile

DEFAULT_MIN_CLONE_LENGTH = 6

CodeLines = Sequence[tuple[int, str]]


@dataclass(frozen=True, order=True)
class CloneBlock:
    """Two equal runs of ``length`` code lines. Line numbers are 1-based source lines."""

    file_a: str
    start_a: int
    file_b: str
    start_b: int
    length: int
    end_a: int
    end_b: int


def detect_clones(
    files: Mapping[str, CodeLines],
    min_length: int = DEFAULT_MIN_CLONE_LENGTH,
) -> tuple[list[CloneBlock], RiskProfile]:
    """Find maximal pairs of identical normalized line runs.

    ``files`` maps a path to its code lines as ``(line number, text)``; blank
    entries are ignored. A pair is reported once, with side A ordered before
    side B by (path, position). Duplicated lines land in the medium level,
    everything else in low.
    """
    if min_length < 2:
        raise ValueError("min_length must be >= 2")
    paths = sorted(files)
    seqs: dict[str, list[str]] = {}
    nums: dict[str, list[int]] = {}
    for path in paths:
        kept = [(ln, normalize_line(t)) for ln, t in files[path]]
        kept = [(ln, t) for ln, t in kept if t]
        nums[path] = [ln for ln, _ in kept]
        seqs[path] = [t for _, t in kept]

    windows: dict[tuple[str, ...], list[tuple[str, int]]] = defaultdict(list)
    for path in paths:
        seq = seqs[path]
        for i in range(len(seq) - min_length + 1):
            windows[tuple(seq[i:i + min_length])].append((path, i))

    blocks: list[CloneBlock] = []
    duplicated: set[tuple[str, int]] = set()
    for positions in windows.values():
        if len(positions) < 2:
            continue
        for x in range(len(positions)):
            pa, i = positions[x]
            a = seqs[pa]
            for y in range(x + 1, len(positions)):
                pb, j = positions[y]
                b = seqs[pb]
                if i > 0 and j > 0 and a[i - 1] == b[j - 1]:
                    continue  # not left-maximal; reported from an earlier start
                n = min_length
                while i + n < len(a) and j + n < len(b) and a[i + n] == b[j + n]:
                    n += 1
                blocks.append(CloneBlock(
                    pa, nums[pa][i], pb, nums[pb][j], n,
                    nums[pa][i + n - 1], nums[pb][j + n - 1],
                ))
                duplicated.update((pa, k) for k in range(i, i + n))
                duplicated.update((pb, k) for k in range(j, j + n))

    blocks.sort()
    total = sum(len(s) for s in seqs.values())
    dup = len(duplicated)
    profile = RiskProfile.from_levels(Guideline.DUPLICATION, {Level.LOW: total - dup, Level.MEDIUM: dup})
    return blocks, profile
