"""Line-oriented lexer for Java/Kotlin-style sources.

Produces two views of every physical line:

* ``code``   -- comments removed, string literals intact (used for clone detection)
* ``struct`` -- comments removed, literal contents blanked to ``""`` (used for
  brace matching, branch counting and call-site scanning)

A line with an empty ``code`` view after stripping is a blank or comment-only
line and is never counted as LOC.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_WS = re.compile(r"\s+")


def normalize_line(text: str) -> str:
    """Trim both ends and collapse internal whitespace runs to one space."""
    return _WS.sub(" ", text).strip()


@dataclass(frozen=True)
class LexedFile:
    code: tuple[str, ...]
    struct: tuple[str, ...]
    comments: tuple[str, ...]

    @property
    def code_lines(self) -> list[int]:
        """1-based numbers of lines that carry code."""
        return [i + 1 for i, text in enumerate(self.code) if text.strip()]


def lex(source: str, nested_comments: bool = False) -> LexedFile:
    """Strip comments and literals. ``nested_comments`` enables Kotlin-style nesting of block comments."""
    code: list[str] = []
    struct: list[str] = []
    comments: list[str] = []
    cur_code: list[str] = []
    cur_struct: list[str] = []
    cur_comment: list[str] = []

    def newline() -> None:
        code.append("".join(cur_code))
        struct.append("".join(cur_struct))
        comments.append("".join(cur_comment))
        cur_code.clear()
        cur_struct.clear()
        cur_comment.clear()

    i, n = 0, len(source)
    state = "code"
    depth = 0  # block comment nesting
    quote = ""
    while i < n:
        ch = source[i]
        if ch == "\r":
            i += 1
            continue
        if ch == "\n":
            if state == "line_comment":
                state = "code"
            elif state == "string" and quote in ('"', "'"):
                # Unterminated single-line literal: resume lexing as code.
                cur_struct.append(quote)
                state = "code"
            newline()
            i += 1
            continue

        if state == "code":
            two = source[i:i + 2]
            if two == "//":
                state = "line_comment"
                i += 2
                continue
            if two == "/*":
                state = "block_comment"
                depth = 1
                i += 2
                continue
            if source.startswith('"""', i):
                state, quote = "string", '"""'
                cur_code.append('"""')
                cur_struct.append('"')
                i += 3
                continue
            if ch in ('"', "'"):
                state, quote = "string", ch
                cur_code.append(ch)
                cur_struct.append(ch)
                i += 1
                continue
            cur_code.append(ch)
            cur_struct.append(ch)
            i += 1
        elif state == "line_comment":
            cur_comment.append(ch)
            i += 1
        elif state == "block_comment":
            two = source[i:i + 2]
            if two == "*/":
                depth -= 1
                i += 2
                if depth == 0:
                    state = "code"
                    # Keep tokens on either side of an inline comment apart.
                    cur_code.append(" ")
                    cur_struct.append(" ")
                continue
            if nested_comments and two == "/*":
                depth += 1
                i += 2
                continue
            cur_comment.append(ch)
            i += 1
        else:  # string
            if quote != '"""' and ch == "\\":
                cur_code.append(source[i:i + 2].rstrip("\n"))
                if i + 1 < n and source[i + 1] == "\n":
                    i += 1
                else:
                    i += 2
                continue
            if source.startswith(quote, i):
                cur_code.append(quote)
                cur_struct.append(quote[0])
                i += len(quote)
                state = "code"
                continue
            cur_code.append(ch)
            i += 1
    newline()
    # A trailing newline produces an empty final record that is not a real line.
    if source.endswith("\n"):
        code.pop()
        struct.pop()
        comments.pop()
    return LexedFile(tuple(code), tuple(struct), tuple(comments))
