"""Per-snapshot analysis: risk profiles for the scored guidelines plus advisory indicators."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath

from ..config import NON_COMPLIANT_LEVELS, Guideline, GuidelineConfig, RunConfig, default_guideline_configs
from .clones import DEFAULT_MIN_CLONE_LENGTH, CloneBlock, detect_clones
from .parser import ParsedTree, parse_tree
from .risk import (
    RiskProfile,
    classify_interface_size,
    classify_module_coupling,
    classify_unit_complexity,
    classify_unit_size,
)

PROFILE_SCHEMA = "maintscore.profile/1"
_MARKER = re.compile(r"\b(TODO|FIXME|XXX|HACK)\b")


@dataclass
class TreeAnalysis:
    total_loc: int
    profiles: dict[Guideline, RiskProfile]
    guidelines: dict[Guideline, GuidelineConfig]
    clones: list[CloneBlock] = field(default_factory=list)
    indicators: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    tree: ParsedTree | None = None

    def to_json(self) -> dict:
        return profile_document(self.total_loc, self.profiles, self.guidelines, self.indicators, self.warnings)


def profile_document(
    total_loc: int,
    profiles: dict[Guideline, RiskProfile],
    guidelines: dict[Guideline, GuidelineConfig],
    indicators: dict[str, float] | None = None,
    warnings: list[str] | None = None,
) -> dict:
    return {
        "schema": PROFILE_SCHEMA,
        "total_loc": total_loc,
        "guidelines": {
            g.value: {
                "loc": profiles[g].as_dict(),
                "boundaries": list(guidelines[g].boundaries),
                "thresholds": {lv.value: guidelines[g].threshold(lv) for lv in NON_COMPLIANT_LEVELS},
            }
            for g in Guideline if g in profiles
        },
        "indicators": dict(sorted((indicators or {}).items())),
        "warnings": sorted(warnings or []),
    }


def dump_profile(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_profile(doc: dict) -> tuple[int, dict[Guideline, RiskProfile], dict[Guideline, GuidelineConfig]]:
    """Inverse of :func:`profile_document` for the parts scoring needs."""
    if doc.get("schema") != PROFILE_SCHEMA:
        raise ValueError(f"unsupported profile schema {doc.get('schema')!r}")
    profiles: dict[Guideline, RiskProfile] = {}
    configs = default_guideline_configs()
    for name, entry in doc["guidelines"].items():
        g = Guideline(name)
        loc = entry["loc"]
        profiles[g] = RiskProfile(g, loc["low"], loc["medium"], loc["high"], loc["veryHigh"])
        t = entry["thresholds"]
        configs[g] = GuidelineConfig(tuple(entry["boundaries"]), (t["medium"], t["high"], t["veryHigh"]))
    return doc["total_loc"], profiles, configs


def _component(path: str) -> str:
    parent = PurePosixPath(path).parent
    return parent.as_posix() if parent.parts else "."


def _gini(values: list[int]) -> float:
    if not values or sum(values) == 0:
        return 0.0
    xs = sorted(values)
    n = len(xs)
    cum = sum((i + 1) * x for i, x in enumerate(xs))
    return (2 * cum) / (n * sum(xs)) - (n + 1) / n


def advisory_indicators(tree: ParsedTree) -> dict[str, float]:
    """Scalar indicators for the guidelines that have no line-level risk profile.

    These are reported alongside the profiles and never enter the score.
    """
    comp_loc: dict[str, int] = {}
    for f in tree.files:
        comp_loc[_component(f.path)] = comp_loc.get(_component(f.path), 0) + f.loc
    module_comp: dict[str, str] = {}
    for f in tree.files:
        for name in f.modules:
            module_comp.setdefault(name, _component(f.path))
    cross = sum(1 for c in tree.calls if module_comp.get(c.callee) != _component(c.path))
    test_loc = sum(f.loc for f in tree.test_files)
    markers = sum(
        len(_MARKER.findall(text)) for f in tree.files for text in f.lexed.comments
    )
    return {
        "component_coupling": cross / len(tree.calls) if tree.calls else 0.0,
        "component_count": float(len(comp_loc)),
        "component_size_gini": _gini(list(comp_loc.values())),
        "codebase_loc": float(tree.total_loc),
        "test_loc_ratio": test_loc / tree.total_loc if tree.total_loc else 0.0,
        "clean_code_markers": float(markers),
    }


def profiles_for(
    tree: ParsedTree,
    guidelines: dict[Guideline, GuidelineConfig],
    min_clone_length: int = DEFAULT_MIN_CLONE_LENGTH,
) -> tuple[dict[Guideline, RiskProfile], list[CloneBlock]]:
    total = tree.total_loc
    clone_input = {
        f.path: [(ln, f.lexed.code[ln - 1]) for ln in f.lexed.code_lines] for f in tree.files
    }
    clones, dup_profile = detect_clones(clone_input, min_clone_length)
    profiles = {
        Guideline.UNIT_SIZE: classify_unit_size(tree.units, guidelines[Guideline.UNIT_SIZE], total),
        Guideline.UNIT_COMPLEXITY: classify_unit_complexity(tree.units, guidelines[Guideline.UNIT_COMPLEXITY], total),
        Guideline.DUPLICATION: dup_profile,
        Guideline.INTERFACE_SIZE: classify_interface_size(tree.units, guidelines[Guideline.INTERFACE_SIZE], total),
        Guideline.MODULE_COUPLING: classify_module_coupling(tree.modules, guidelines[Guideline.MODULE_COUPLING], total),
    }
    return profiles, clones


def analyze_tree(root: Path | str, config: RunConfig | None = None) -> TreeAnalysis:
    config = config or RunConfig()
    tree = parse_tree(root, config.language_profile)
    profiles, clones = profiles_for(tree, config.guidelines, config.min_clone_length)
    return TreeAnalysis(
        total_loc=tree.total_loc,
        profiles=profiles,
        guidelines=config.guidelines,
        clones=clones,
        indicators=advisory_indicators(tree),
        warnings=list(tree.warnings),
        tree=tree,
    )
