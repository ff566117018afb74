from .clones import CloneBlock, detect_clones
from .lexer import lex, normalize_line
from .parser import ModuleFanIn, ParsedTree, SourceUnit, parse_source, parse_tree
from .profile import TreeAnalysis, analyze_tree, load_profile, profile_document
from .risk import (
    RiskProfile,
    classify_interface_size,
    classify_module_coupling,
    classify_unit_complexity,
    classify_unit_size,
)

__all__ = [
    "CloneBlock",
    "ModuleFanIn",
    "ParsedTree",
    "RiskProfile",
    "SourceUnit",
    "TreeAnalysis",
    "analyze_tree",
    "classify_interface_size",
    "classify_module_coupling",
    "classify_unit_complexity",
    "classify_unit_size",
    "detect_clones",
    "lex",
    "load_profile",
    "normalize_line",
    "parse_source",
    "parse_tree",
    "profile_document",
]
