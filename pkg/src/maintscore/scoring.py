"""Maintainability score of a snapshot and its change across a commit.

For each guideline and each non-compliant level ``l`` (medium, high, very
high), lines at severity >= ``l`` are non-compliant at ``l``. Compliance is

    C(l) = compliant(l) - w(l) * non_compliant(l),   w(l) = (1 - T(l)) / T(l)

the guideline score is the mean of C over the three levels, and the
snapshot score sums (or optionally averages) the guideline scores.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Mapping

from .config import NON_COMPLIANT_LEVELS, ConfigError, Guideline, GuidelineConfig, Level
from .metrics.risk import RiskProfile

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-9


def weight(threshold: float) -> float:
    """Penalty per non-compliant line relative to one compliant line."""
    if not 0 < threshold < 1:
        raise ConfigError(f"threshold must be in (0, 1), got {threshold}")
    return (1 - threshold) / threshold


@dataclass(frozen=True)
class LevelCompliance:
    level: Level
    compliant: int
    non_compliant: int
    threshold: float
    weight: float
    compliance: float

    def as_dict(self) -> dict:
        return {
            "compliant": self.compliant,
            "non_compliant": self.non_compliant,
            "threshold": self.threshold,
            "weight": self.weight,
            "compliance": self.compliance,
        }


def level_compliance(profile: RiskProfile, level: Level, threshold: float) -> LevelCompliance:
    if level is Level.LOW:
        raise ValueError("compliance is only defined for medium, high and veryHigh")
    w = weight(threshold)
    bad = profile.at_or_above(level)
    good = profile.total - bad
    return LevelCompliance(level, good, bad, threshold, w, good - w * bad)


def level_breakdown(profile: RiskProfile, config: GuidelineConfig) -> tuple[LevelCompliance, ...]:
    return tuple(level_compliance(profile, lv, config.threshold(lv)) for lv in NON_COMPLIANT_LEVELS)


def guideline_score(profile: RiskProfile, config: GuidelineConfig) -> float:
    levels = level_breakdown(profile, config)
    return sum(lc.compliance for lc in levels) / len(levels)


@dataclass(frozen=True)
class MaintainabilitySnapshot:
    commit: str
    score: float
    guideline_scores: dict[Guideline, float]
    levels: dict[Guideline, tuple[LevelCompliance, ...]] = field(default_factory=dict)
    aggregate: str = "sum"

    def to_json(self) -> dict:
        return {
            "commit": self.commit,
            "M": self.score,
            "aggregate": self.aggregate,
            "guidelines": {
                g.value: {
                    "M_g": self.guideline_scores[g],
                    "levels": {lc.level.value: lc.as_dict() for lc in self.levels.get(g, ())},
                }
                for g in Guideline if g in self.guideline_scores
            },
        }


def snapshot_score(
    profiles: Mapping[Guideline, RiskProfile],
    configs: Mapping[Guideline, GuidelineConfig],
    selected: tuple[Guideline, ...] | None = None,
    aggregate: str = "sum",
    commit: str = "",
) -> MaintainabilitySnapshot:
    """Aggregate guideline scores over the selected guidelines (default: all profiled)."""
    if aggregate not in ("sum", "mean"):
        raise ConfigError(f"aggregate must be 'sum' or 'mean', got {aggregate!r}")
    chosen = [g for g in Guideline if g in (selected if selected is not None else profiles)]
    missing = [g.value for g in chosen if g not in profiles]
    if missing:
        raise ValueError(f"no risk profile for selected guidelines: {missing}")
    scores: dict[Guideline, float] = {}
    levels: dict[Guideline, tuple[LevelCompliance, ...]] = {}
    for g in chosen:
        levels[g] = level_breakdown(profiles[g], configs[g])
        scores[g] = sum(lc.compliance for lc in levels[g]) / len(levels[g])
    if not chosen:
        log.warning("no guidelines selected; maintainability score is 0")
        total = 0.0
    else:
        total = sum(scores[g] for g in chosen)
        if aggregate == "mean":
            total /= len(chosen)
    return MaintainabilitySnapshot(commit, total, scores, levels, aggregate)


class Direction(str, enum.Enum):
    DECREASE = "decrease"
    UNCHANGED = "unchanged"
    INCREASE = "increase"


def direction_of(delta: float, epsilon: float = DEFAULT_EPSILON) -> Direction:
    if abs(delta) < epsilon:
        return Direction.UNCHANGED
    return Direction.INCREASE if delta > 0 else Direction.DECREASE


@dataclass(frozen=True)
class CommitAnalysis:
    project: str
    commit: str
    parent: str
    category: str
    m_before: float
    m_after: float
    delta: float
    direction: Direction

    CSV_HEADER = ("project", "commit", "parent", "category", "M_before", "M_after", "delta", "direction")

    def csv_row(self) -> list[str]:
        return [
            self.project, self.commit, self.parent, self.category,
            repr(self.m_before), repr(self.m_after), repr(self.delta), self.direction.value,
        ]


def delta(
    before: MaintainabilitySnapshot,
    after: MaintainabilitySnapshot,
    project: str = "",
    category: str = "",
    epsilon: float = DEFAULT_EPSILON,
) -> CommitAnalysis:
    """Score change from the parent snapshot ``before`` to the commit snapshot ``after``."""
    d = after.score - before.score
    return CommitAnalysis(project, after.commit, before.commit, category, before.score, after.score, d, direction_of(d, epsilon))
