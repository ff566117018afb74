"""Configuration objects: guideline boundaries, thresholds and run settings.

Config files use the INI dialect understood by :mod:`configparser`::

    [run]
    seed = 7
    aggregate = sum            ; sum | mean
    epsilon = 1e-9
    workers = 2
    cache_dir = ~/.cache/maintscore
    guidelines = UnitSize, UnitComplexity, Duplication, InterfaceSize, ModuleCoupling
    min_clone_length = 6
    min_category_count = 20
    alpha = 0.05
    zero_method = wilcox       ; wilcox | pratt

    [UnitSize]
    boundaries = 15, 30, 60
    thresholds = 0.437, 0.223, 0.069

Any key may be omitted; omitted keys keep their defaults.
"""

from __future__ import annotations

import configparser
import enum
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

CACHE_ENV_VAR = "MAINTSCORE_CACHE"


class ConfigError(ValueError):
    """Invalid configuration value. Maps to CLI exit code 1."""


class Guideline(str, enum.Enum):
    UNIT_SIZE = "UnitSize"
    UNIT_COMPLEXITY = "UnitComplexity"
    DUPLICATION = "Duplication"
    INTERFACE_SIZE = "InterfaceSize"
    MODULE_COUPLING = "ModuleCoupling"


class Level(str, enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    VERY_HIGH = "veryHigh"

    @property
    def rank(self) -> int:
        return _LEVEL_ORDER.index(self)


_LEVEL_ORDER = (Level.LOW, Level.MEDIUM, Level.HIGH, Level.VERY_HIGH)
LEVELS = _LEVEL_ORDER
NON_COMPLIANT_LEVELS = _LEVEL_ORDER[1:]

# Default cumulative non-compliance thresholds (share of LOC tolerated at or above each level).
DEFAULT_THRESHOLDS = (0.437, 0.223, 0.069)

DEFAULT_BOUNDARIES: dict[Guideline, tuple[int, int, int]] = {
    Guideline.UNIT_SIZE: (15, 30, 60),
    Guideline.UNIT_COMPLEXITY: (4, 10, 25),
    Guideline.INTERFACE_SIZE: (2, 4, 6),
    Guideline.MODULE_COUPLING: (10, 20, 50),
    # Duplication is classified by membership in a clone block, not by cutoffs.
    Guideline.DUPLICATION: (0, 0, 0),
}


@dataclass(frozen=True)
class GuidelineConfig:
    """Risk boundaries and cumulative thresholds for one guideline.

    ``boundaries`` are the largest metric values still at low, medium and
    high risk; anything above the last one is very high. ``thresholds`` are
    T(medium), T(high), T(veryHigh).
    """

    boundaries: tuple[int, int, int]
    thresholds: tuple[float, float, float] = DEFAULT_THRESHOLDS

    def __post_init__(self) -> None:
        if len(self.boundaries) != 3 or len(self.thresholds) != 3:
            raise ConfigError("boundaries and thresholds need exactly three values")
        tm, th, tv = self.thresholds
        if not (1 > tm > th > tv > 0):
            raise ConfigError(
                f"thresholds must satisfy 1 > T(medium) > T(high) > T(veryHigh) > 0, got {self.thresholds}"
            )

    def threshold(self, level: Level) -> float:
        return self.thresholds[NON_COMPLIANT_LEVELS.index(level)]

    def level_of(self, value: float) -> Level:
        lo, mid, hi = self.boundaries
        if value <= lo:
            return Level.LOW
        if value <= mid:
            return Level.MEDIUM
        if value <= hi:
            return Level.HIGH
        return Level.VERY_HIGH


def validate_boundaries(boundaries: tuple[int, int, int]) -> None:
    a, b, c = boundaries
    if not (a < b < c):
        raise ConfigError(f"boundaries must be strictly increasing, got {boundaries}")


def default_guideline_configs() -> dict[Guideline, GuidelineConfig]:
    return {g: GuidelineConfig(DEFAULT_BOUNDARIES[g]) for g in Guideline}


@dataclass(frozen=True)
class LanguageProfile:
    name: str
    extensions: tuple[str, ...]
    # Directory names whose contents count as test code rather than production code.
    test_dirs: tuple[str, ...] = ("test", "tests", "androidTest", "testDebug", "testRelease")
    skip_dirs: tuple[str, ...] = (".git", "build", ".gradle", ".idea", "node_modules")


LANGUAGE_PROFILES = {
    "jvm": LanguageProfile("jvm", (".java", ".kt")),
    "java": LanguageProfile("java", (".java",)),
    "kotlin": LanguageProfile("kotlin", (".kt",)),
}


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env).expanduser()
    return Path("~/.cache/maintscore").expanduser()


@dataclass(frozen=True)
class RunConfig:
    dataset: Path | None = None
    cache_dir: Path = field(default_factory=default_cache_dir)
    guidelines: dict[Guideline, GuidelineConfig] = field(default_factory=default_guideline_configs)
    selected: tuple[Guideline, ...] = tuple(Guideline)
    seed: int = 7
    aggregate: str = "sum"
    epsilon: float = 1e-9
    workers: int = 1
    language: str = "jvm"
    min_clone_length: int = 6
    min_category_count: int = 20
    alpha: float = 0.05
    zero_method: str = "wilcox"

    def __post_init__(self) -> None:
        if self.aggregate not in ("sum", "mean"):
            raise ConfigError(f"aggregate must be 'sum' or 'mean', got {self.aggregate!r}")
        if self.zero_method not in ("wilcox", "pratt"):
            raise ConfigError(f"zero_method must be 'wilcox' or 'pratt', got {self.zero_method!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be non-negative")
        if self.min_clone_length < 2:
            raise ConfigError("min_clone_length must be >= 2")
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must be in (0, 1)")
        if self.language not in LANGUAGE_PROFILES:
            raise ConfigError(f"unknown language profile {self.language!r}")
        for g, cfg in self.guidelines.items():
            if g is not Guideline.DUPLICATION:
                validate_boundaries(cfg.boundaries)

    @property
    def language_profile(self) -> LanguageProfile:
        return LANGUAGE_PROFILES[self.language]


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"expected integers, got {text!r}") from exc


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"expected numbers, got {text!r}") from exc


def parse_guidelines(text: str) -> tuple[Guideline, ...]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    try:
        return tuple(Guideline(n) for n in names)
    except ValueError as exc:
        raise ConfigError(f"unknown guideline in {text!r}") from exc


def load_config(path: Path | None = None, **overrides) -> RunConfig:
    """Read a config file (optional) and apply keyword overrides on top."""
    values: dict = {}
    guidelines = default_guideline_configs()
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if parser.has_section("run"):
            run = parser["run"]
            casts = {
                "seed": int, "workers": int, "min_clone_length": int, "min_category_count": int,
                "epsilon": float, "alpha": float,
                "aggregate": str, "zero_method": str, "language": str,
            }
            for key, cast in casts.items():
                if key in run:
                    try:
                        values[key] = cast(run[key])
                    except ValueError as exc:
                        raise ConfigError(f"bad value for {key}: {run[key]!r}") from exc
            if "cache_dir" in run:
                values["cache_dir"] = Path(run["cache_dir"]).expanduser()
            if "dataset" in run:
                values["dataset"] = Path(run["dataset"])
            if "guidelines" in run:
                values["selected"] = parse_guidelines(run["guidelines"])
        for g in Guideline:
            if parser.has_section(g.value):
                sec = parser[g.value]
                cfg = guidelines[g]
                if "boundaries" in sec:
                    cfg = replace(cfg, boundaries=_ints(sec["boundaries"]))
                if "thresholds" in sec:
                    cfg = replace(cfg, thresholds=_floats(sec["thresholds"]))
                guidelines[g] = cfg
    values["guidelines"] = guidelines
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
