"""Risk profiles: partition of a snapshot's production LOC into four severity levels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, TypeVar

from ..config import LEVELS, Guideline, GuidelineConfig, Level, validate_boundaries
from .parser import ModuleFanIn, SourceUnit

T = TypeVar("T")


@dataclass(frozen=True)
class RiskProfile:
    guideline: Guideline
    low: int = 0
    medium: int = 0
    high: int = 0
    very_high: int = 0

    def __post_init__(self) -> None:
        if min(self.low, self.medium, self.high, self.very_high) < 0:
            raise ValueError(f"negative LOC in risk profile: {self}")

    @classmethod
    def from_levels(cls, guideline: Guideline, loc: Mapping[Level, int]) -> "RiskProfile":
        return cls(
            guideline,
            low=loc.get(Level.LOW, 0),
            medium=loc.get(Level.MEDIUM, 0),
            high=loc.get(Level.HIGH, 0),
            very_high=loc.get(Level.VERY_HIGH, 0),
        )

    def __getitem__(self, level: Level) -> int:
        return (self.low, self.medium, self.high, self.very_high)[level.rank]

    @property
    def total(self) -> int:
        return self.low + self.medium + self.high + self.very_high

    def at_or_above(self, level: Level) -> int:
        """Cumulative LOC at severity >= ``level``."""
        return sum(self[lv] for lv in LEVELS[level.rank:])

    def scaled(self, k: int) -> "RiskProfile":
        return RiskProfile(self.guideline, self.low * k, self.medium * k, self.high * k, self.very_high * k)

    def as_dict(self) -> dict[str, int]:
        return {lv.value: self[lv] for lv in LEVELS}


def _classify(
    guideline: Guideline,
    items: Iterable[T],
    metric: Callable[[T], float],
    size: Callable[[T], int],
    config: GuidelineConfig,
    total_loc: int | None,
) -> RiskProfile:
    validate_boundaries(config.boundaries)
    loc = {lv: 0 for lv in LEVELS}
    for item in items:
        loc[config.level_of(metric(item))] += size(item)
    if total_loc is not None:
        claimed = sum(loc.values())
        if claimed > total_loc:
            raise ValueError(f"{guideline.value}: classified {claimed} LOC exceeds total {total_loc}")
        loc[Level.LOW] += total_loc - claimed
    return RiskProfile.from_levels(guideline, loc)


def classify_unit_size(units: Iterable[SourceUnit], config: GuidelineConfig, total_loc: int | None = None) -> RiskProfile:
    """Attribute every unit's lines to the level of its LOC; lines outside units are low.

    If ``total_loc`` is omitted only unit lines are counted.
    """
    return _classify(Guideline.UNIT_SIZE, units, lambda u: u.loc, lambda u: u.loc, config, total_loc)


def classify_unit_complexity(units: Iterable[SourceUnit], config: GuidelineConfig, total_loc: int | None = None) -> RiskProfile:
    return _classify(Guideline.UNIT_COMPLEXITY, units, lambda u: u.branch_points, lambda u: u.loc, config, total_loc)


def classify_interface_size(units: Iterable[SourceUnit], config: GuidelineConfig, total_loc: int | None = None) -> RiskProfile:
    return _classify(Guideline.INTERFACE_SIZE, units, lambda u: u.parameter_count, lambda u: u.loc, config, total_loc)


def classify_module_coupling(modules: Iterable[ModuleFanIn], config: GuidelineConfig, total_loc: int | None = None) -> RiskProfile:
    return _classify(Guideline.MODULE_COUPLING, modules, lambda m: m.fan_in, lambda m: m.loc, config, total_loc)
