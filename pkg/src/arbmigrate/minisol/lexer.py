"""Hand-written longest-match tokenizer for MiniSol.

Whitespace and comments are skipped but positions are tracked, so every token
knows its byte offset and 1-based line/column (tabs count as one column).  A
token's ``text`` is the exact source slice, i.e.
``source[tok.offset : tok.offset + len(tok.text)] == tok.text``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number"
    HEX = "hex"
    ADDRESS = "address"
    STRING = "string"
    PUNCT = "punctuation"
    OPERATOR = "operator"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    line: int
    column: int
    severity: Severity = Severity.ERROR

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity.value}: {self.message}"


class MiniSolSyntaxError(Exception):
    """Raised when tokenizing or parsing fails; carries every diagnostic found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int
    offset: int


KEYWORDS = frozenset(
    {
        "contract", "function", "returns", "require", "if", "else", "for",
        "while", "emit", "return", "mapping",
        "uint256", "uint", "address", "bool", "string",
        "public", "private", "internal", "external",
        "payable", "view", "pure",
        "memory", "calldata", "storage",
        "true", "false",
    }
)

# Longest first so e.g. '==' wins over '='.
_OPERATORS = (
    "||", "&&", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=",
    "++", "--", "=>", "<", ">", "+", "-", "*", "/", "%", "!", "=",
)

_PUNCT = "(){}[];,."


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(source: str) -> list[Token]:
    """Tokenize; raises MiniSolSyntaxError listing every lexical error."""
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", i):
            end = source.find("\n", i)
            advance((end if end != -1 else n) - i)
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end == -1:
                diagnostics.append(Diagnostic("unterminated block comment", line, col))
                break
            advance(end + 2 - i)
            continue
        if c == '"':
            start_line, start_col, start = line, col, i
            j = i + 1
            value_ok = False
            while j < n:
                if source[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if source[j] == '"':
                    value_ok = True
                    break
                if source[j] == "\n":
                    break
                j += 1
            if not value_ok:
                diagnostics.append(Diagnostic("unterminated string literal", start_line, start_col))
                advance(1)
                continue
            text = source[start : j + 1]
            tokens.append(Token(TokenKind.STRING, text, start_line, start_col, start))
            advance(len(text))
            continue
        if source.startswith("0x", i) or source.startswith("0X", i):
            j = i + 2
            while j < n and source[j] in "0123456789abcdefABCDEF":
                j += 1
            if j == i + 2:
                diagnostics.append(Diagnostic("hex literal needs at least one digit", line, col))
                advance(2)
                continue
            text = source[i:j]
            kind = TokenKind.ADDRESS if len(text) == 42 else TokenKind.HEX
            tokens.append(Token(kind, text, line, col, i))
            advance(len(text))
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            text = source[i:j]
            tokens.append(Token(TokenKind.NUMBER, text, line, col, i))
            advance(len(text))
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, line, col, i))
            advance(len(text))
            continue
        for op in _OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(TokenKind.OPERATOR, op, line, col, i))
                advance(len(op))
                break
        else:
            if c in _PUNCT:
                tokens.append(Token(TokenKind.PUNCT, c, line, col, i))
                advance(1)
            else:
                diagnostics.append(Diagnostic(f"illegal character {c!r}", line, col))
                advance(1)

    if diagnostics:
        raise MiniSolSyntaxError(diagnostics)
    return tokens


def unescape_string(text: str) -> str:
    """Literal text (with quotes) -> value. Supports \\\\ \\" \\n \\t."""
    body = text[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)
