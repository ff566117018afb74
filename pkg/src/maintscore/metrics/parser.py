"""Brace-matching extraction of units (methods) and modules (classes) from a source tree."""

from __future__ import annotations

import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from ..config import LANGUAGE_PROFILES, LanguageProfile
from .lexer import LexedFile, lex

log = logging.getLogger(__name__)

CONTROL_WORDS = frozenset({
    "if", "for", "while", "switch", "catch", "synchronized", "when", "try", "else",
    "do", "return", "new", "throw", "finally", "super", "this", "assert", "init",
})
CLASS_WORDS = re.compile(r"(?<![\w$@.])(class|interface|enum|object|record)(?![\w$])")
IDENT_BEFORE_PAREN = re.compile(r"([A-Za-z_$][\w$]*)\s*(?:<[^<>()]*>)?\s*$")
# Java: ``throws`` clause after the parameter list; Kotlin: return type.
JAVA_TAIL = re.compile(r"^\s*(throws\s+[\w$.<>,\s?]+)?\s*$")
KOTLIN_TAIL = re.compile(r"^\s*(:\s*[^{};=]+)?\s*$")
CLASS_NAME = re.compile(r"(?<![\w$@.])(?:class|interface|enum\s+class|enum|object|record)\s+([A-Za-z_$][\w$]*)")

BRANCH_WORDS = re.compile(r"(?<![\w$])(if|for|while|catch|case)(?![\w$])")
SHORT_CIRCUIT = re.compile(r"&&|\|\|")


@dataclass(frozen=True)
class SourceUnit:
    path: str
    name: str
    start_line: int
    end_line: int
    loc: int
    branch_points: int
    parameter_count: int


@dataclass(frozen=True)
class ModuleFanIn:
    name: str
    fan_in: int
    loc: int


@dataclass(frozen=True)
class CallSite:
    caller: str
    callee: str
    path: str
    line: int


@dataclass
class ParsedFile:
    path: str
    lexed: LexedFile
    units: list[SourceUnit]
    # top-level type name -> code line numbers belonging to it
    modules: dict[str, list[int]]
    is_test: bool = False

    @property
    def loc(self) -> int:
        return len(self.lexed.code_lines)


@dataclass
class ParsedTree:
    files: list[ParsedFile] = field(default_factory=list)
    test_files: list[ParsedFile] = field(default_factory=list)
    units: list[SourceUnit] = field(default_factory=list)
    modules: list[ModuleFanIn] = field(default_factory=list)
    calls: list[CallSite] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def total_loc(self) -> int:
        return sum(f.loc for f in self.files)

    @property
    def module_lines(self) -> dict[str, list[tuple[str, int]]]:
        out: dict[str, list[tuple[str, int]]] = defaultdict(list)
        for f in self.files:
            for name, lines in f.modules.items():
                out[name].extend((f.path, ln) for ln in lines)
        return out


class UnbalancedBraces(Exception):
    pass


def _split_params(text: str) -> int:
    if not text.strip():
        return 0
    depth = 0
    count = 1
    for ch in text:
        if ch in "(<[{":
            depth += 1
        elif ch in ")>]}":
            depth -= 1
        elif ch == "," and depth == 0:
            count += 1
    return count


def _method_header(header: str, kotlin: bool) -> tuple[str, int] | None:
    """Return (name, parameter count) if ``header`` declares a method with a body."""
    if CLASS_WORDS.search(header):
        return None
    close = header.rfind(")")
    if close < 0:
        return None
    tail = header[close + 1:]
    if not (KOTLIN_TAIL if kotlin else JAVA_TAIL).match(tail):
        return None
    depth = 0
    open_ = -1
    for k in range(close, -1, -1):
        if header[k] == ")":
            depth += 1
        elif header[k] == "(":
            depth -= 1
            if depth == 0:
                open_ = k
                break
    if open_ < 0:
        return None
    before = header[:open_]
    m = IDENT_BEFORE_PAREN.search(before)
    if not m:
        return None
    name = m.group(1)
    if name in CONTROL_WORDS or "->" in before:
        return None
    prefix = before[:m.start()]
    # Assignments, anonymous classes and calls are not declarations.
    if "=" in prefix.replace("==", "") or re.search(r"(?<![\w$])new(?![\w$])", prefix):
        return None
    if kotlin:
        if not re.search(r"(?<![\w$])fun(?![\w$])", prefix):
            return None
    elif prefix.rstrip().endswith("."):
        return None
    return name, _split_params(header[open_ + 1:close])


def _ternaries(text: str) -> int:
    count = 0
    for m in re.finditer(r"\?", text):
        k = m.start()
        nxt = text[k + 1:].lstrip()
        prev = text[:k].rstrip()
        if nxt[:1] in (".", ":", "?") or prev[-1:] == "?":
            continue
        # generic wildcards: <?>, <? extends T>, Map<K, ?>
        if prev[-1:] in ("<", ",") or nxt[:1] in (">", ","):
            continue
        if re.match(r"(extends|super)(?![\w$])", nxt):
            continue
        count += 1
    return count


def _count_branches(struct_lines: list[str], when_arrows: int, java: bool) -> int:
    text = "\n".join(struct_lines)
    n = len(BRANCH_WORDS.findall(text)) + len(SHORT_CIRCUIT.findall(text)) + when_arrows
    if java:
        n += _ternaries(text)
    return n


@dataclass
class _Block:
    kind: str  # "class" | "unit" | "when" | "other"
    name: str = ""
    start_line: int = 0
    params: int = 0
    when_arrows: int = 0
    open_line: int = 0
    open_col: int = 0


def parse_source(path: str, source: str) -> tuple[ParsedFile, list[str]]:
    """Parse one file. Unbalanced braces degrade to a single whole-file unit."""
    kotlin = path.endswith(".kt") or path.endswith(".kts")
    lexed = lex(source, nested_comments=kotlin)
    stem = Path(path).stem
    warnings: list[str] = []
    try:
        units, class_spans = _extract(path, lexed, kotlin)
    except UnbalancedBraces as exc:
        warnings.append(f"{path}: unbalanced braces ({exc}); whole file treated as one unit")
        code_lines = lexed.code_lines
        struct = [lexed.struct[ln - 1] for ln in code_lines]
        unit = SourceUnit(
            path=path,
            name=stem,
            start_line=code_lines[0] if code_lines else 1,
            end_line=code_lines[-1] if code_lines else 1,
            loc=len(code_lines),
            branch_points=_count_branches(struct, 0, not kotlin),
            parameter_count=0,
        )
        return ParsedFile(path, lexed, [unit] if code_lines else [], {stem: code_lines}), warnings

    modules: dict[str, list[int]] = {}
    code_lines = lexed.code_lines
    if class_spans:
        # Each line belongs to the first top-level type whose span covers it.
        for ln in code_lines:
            for name, lo, hi in class_spans:
                if lo <= ln <= hi:
                    modules.setdefault(name, []).append(ln)
                    break
    elif code_lines:
        modules[stem] = list(code_lines)
    return ParsedFile(path, lexed, units, modules), warnings


def _extract(path: str, lexed: LexedFile, kotlin: bool) -> tuple[list[SourceUnit], list[tuple[str, int, int]]]:
    units: list[SourceUnit] = []
    class_spans: list[tuple[str, int, int]] = []
    stack: list[_Block] = []
    header: list[str] = []
    header_line = 0
    code_line_set = set(lexed.code_lines)
    claimed: set[int] = set()

    def in_unit() -> bool:
        return any(b.kind == "unit" for b in stack)

    for lineno, line in enumerate(lexed.struct, start=1):
        for col, ch in enumerate(line):
            if ch == "{":
                text = "".join(header)
                block = _Block("other")
                if not in_unit():
                    cls = CLASS_NAME.search(text)
                    if cls:
                        block = _Block("class", name=cls.group(1), start_line=header_line or lineno)
                    else:
                        found = _method_header(text, kotlin)
                        if found:
                            name, params = found
                            block = _Block("unit", name=name, start_line=_name_line(lexed, name, header_line, lineno), params=params)
                if block.kind == "other" and re.search(r"(?<![\w$])when(?![\w$])", text) and kotlin:
                    block = _Block("when")
                block.open_line, block.open_col = lineno, col
                stack.append(block)
                header.clear()
                header_line = 0
            elif ch == "}":
                if not stack:
                    raise UnbalancedBraces(f"unexpected '}}' at line {lineno}")
                block = stack.pop()
                if block.kind == "unit":
                    lo, hi = block.start_line, lineno
                    body = _body_text(lexed, block.open_line, block.open_col, lineno, col)
                    units.append(SourceUnit(
                        path=path,
                        name=block.name,
                        start_line=lo,
                        end_line=hi,
                        loc=_claim(claimed, code_line_set, lo, hi),
                        branch_points=_count_branches(body, block.when_arrows, not kotlin),
                        parameter_count=block.params,
                    ))
                elif block.kind == "class" and not any(b.kind == "class" for b in stack):
                    class_spans.append((block.name, block.start_line, lineno))
                elif block.kind == "when":
                    # Propagate when labels to the enclosing unit.
                    for outer in reversed(stack):
                        if outer.kind == "unit":
                            outer.when_arrows += block.when_arrows
                            break
                header.clear()
                header_line = 0
            elif ch == ";":
                header.clear()
                header_line = 0
            else:
                if ch == "-" and line[col + 1:col + 2] == ">" and stack and stack[-1].kind == "when":
                    if not line[:col].strip().startswith("else"):
                        stack[-1].when_arrows += 1
                if not header and ch.isspace():
                    continue
                if not header_line:
                    header_line = lineno
                header.append(ch)
        if header:
            header.append(" ")
    if stack:
        raise UnbalancedBraces(f"{len(stack)} unclosed '{{' at end of file")
    return units, class_spans


def _claim(claimed: set[int], code_lines: set[int], lo: int, hi: int) -> int:
    """Count code lines in [lo, hi] not already owned by an earlier unit."""
    fresh = {k for k in range(lo, hi + 1) if k in code_lines} - claimed
    claimed |= fresh
    return len(fresh)


def _name_line(lexed: LexedFile, name: str, first: int, last: int) -> int:
    """Line of the declaration's name token within the header span."""
    pattern = re.compile(rf"(?<![\w$]){re.escape(name)}\s*(?:<[^<>()]*>)?\s*\(")
    for k in range(last, (first or last) - 1, -1):
        if pattern.search(lexed.struct[k - 1]):
            return k
    return first or last


def _body_text(lexed: LexedFile, open_line: int, open_col: int, close_line: int, close_col: int) -> list[str]:
    """Structural text strictly between a unit's braces."""
    if open_line == close_line:
        return [lexed.struct[open_line - 1][open_col + 1:close_col]]
    return (
        [lexed.struct[open_line - 1][open_col + 1:]]
        + list(lexed.struct[open_line:close_line - 1])
        + [lexed.struct[close_line - 1][:close_col]]
    )


def _is_test_path(rel: Path, profile: LanguageProfile) -> bool:
    return any(part in profile.test_dirs for part in rel.parts[:-1])


def iter_source_files(root: Path, profile: LanguageProfile) -> list[Path]:
    out = []
    for p in root.rglob("*"):
        if not p.is_file() or p.suffix not in profile.extensions:
            continue
        rel = p.relative_to(root)
        if any(part in profile.skip_dirs for part in rel.parts[:-1]):
            continue
        out.append(p)
    return sorted(out, key=lambda p: p.relative_to(root).as_posix())


def parse_tree(root: Path | str, language: str | LanguageProfile = "jvm") -> ParsedTree:
    """Parse every production source file under ``root``.

    Files under test directories are parsed into ``test_files`` but contribute
    nothing to units, modules or LOC.
    """
    root = Path(root)
    profile = LANGUAGE_PROFILES[language] if isinstance(language, str) else language
    tree = ParsedTree()
    if not root.is_dir():
        raise FileNotFoundError(root)
    for p in iter_source_files(root, profile):
        rel = p.relative_to(root)
        rel_s = rel.as_posix()
        try:
            source = p.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            tree.warnings.append(f"{rel_s}: unreadable ({exc.__class__.__name__}); skipped")
            continue
        parsed, warnings = parse_source(rel_s, source)
        tree.warnings.extend(warnings)
        if _is_test_path(rel, profile):
            parsed.is_test = True
            tree.test_files.append(parsed)
            continue
        tree.files.append(parsed)
        tree.units.extend(parsed.units)

    tree.calls = _call_sites(tree)
    module_loc: dict[str, int] = defaultdict(int)
    for f in tree.files:
        for name, lines in f.modules.items():
            module_loc[name] += len(lines)
    fan_in: dict[str, int] = defaultdict(int)
    for call in tree.calls:
        fan_in[call.callee] += 1
    tree.modules = [ModuleFanIn(name, fan_in[name], module_loc[name]) for name in sorted(module_loc)]
    for w in tree.warnings:
        log.warning(w)
    return tree


def _call_sites(tree: ParsedTree) -> list[CallSite]:
    names = sorted({name for f in tree.files for name in f.modules}, key=lambda s: (-len(s), s))
    if not names:
        return []
    alt = "|".join(re.escape(n) for n in names)
    java_re = re.compile(
        rf"(?<![\w$])new\s+({alt})\s*[(<]|(?<![\w$])({alt})\s*\.\s*[A-Za-z_$][\w$]*\s*(?:<[^<>()]*>\s*)?\("
    )
    kotlin_re = re.compile(
        rf"(?<![\w$])({alt})\s*\.\s*[A-Za-z_$][\w$]*\s*\(|(?<![\w$.])({alt})\s*\("
    )
    calls: list[CallSite] = []
    for f in tree.files:
        owner = {ln: name for name, lines in f.modules.items() for ln in lines}
        rx = kotlin_re if f.path.endswith((".kt", ".kts")) else java_re
        for ln, text in enumerate(f.lexed.struct, start=1):
            caller = owner.get(ln, Path(f.path).stem)
            for m in rx.finditer(text):
                callee = m.group(1) or m.group(2)
                if callee == caller:
                    continue
                if rx is kotlin_re and m.group(2) and re.search(
                    rf"(?<![\w$])(class|interface|object|fun)\s+{re.escape(callee)}\s*\($", text[:m.end()]
                ):
                    continue
                calls.append(CallSite(caller, callee, f.path, ln))
    return calls
