"""Tokenizer for Green source text."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Any

from .diagnostics import Span

KEYWORDS = frozenset("""
    abstract after and array assert assertion before begin boolean break byte
    case char class const do double else end endif enum exception false for
    if integer long loop nil not object of or otherwise private proc public
    real reflective repeat result return self shell subclass subclassOf
    subtypeOf super then to true try type until var while xor
""".split())

BASIC_TYPES = frozenset(["boolean", "byte", "char", "double", "integer", "long", "real"])

# longest first so that maximal munch works by prefix test
OPERATORS = [
    "...", "==", "<>", "<=", ">=", "<<", ">>", "++", "--",
    "<", ">", "=", "+", "-", "*", "/", "%", "~", "&", "|", "^",
    "(", ")", "[", "]", ",", ";", ":", ".", "#", "@",
]

LITERAL_KINDS = ("char", "string", "boolean", "byte", "integer", "long", "real", "double")

ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\", "'": "'", '"': '"'}

INT_MAX = 2**31 - 1
LONG_MAX = 2**63 - 1


def to_float32(x: float) -> float:
    try:
        return struct.unpack("f", struct.pack("f", x))[0]
    except OverflowError:
        return float("inf") if x > 0 else float("-inf")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "kw", "op", "eof", or one of LITERAL_KINDS
    lexeme: str
    span: Span
    value: Any = None

    def is_op(self, *ops: str) -> bool:
        return self.kind == "op" and self.lexeme in ops

    def is_kw(self, *words: str) -> bool:
        return self.kind == "kw" and self.lexeme in words

    def __repr__(self) -> str:
        if self.kind in LITERAL_KINDS:
            return f"{self.kind.capitalize()}({self.value!r})"
        return f"{self.kind}:{self.lexeme}"


class LexError(Exception):
    def __init__(self, span: Span, message: str, category: str):
        self.span = span
        self.message = message
        self.category = category
        super().__init__(f"{span.line}:{span.col}: {message}")


class _Scanner:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []

    def peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.src[i] if i < len(self.src) else ""

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos >= len(self.src):
                return
            if self.src[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def span_from(self, start: int, line: int, col: int) -> Span:
        return Span(start, self.pos - start, line, col)

    def error(self, start, line, col, message, category):
        raise LexError(Span(start, max(1, self.pos - start), line, col), message, category)

    def run(self) -> list[Token]:
        while True:
            self.skip_trivia()
            if self.pos >= len(self.src):
                break
            start, line, col = self.pos, self.line, self.col
            c = self.peek()
            if c.isalpha() and c.isascii():
                self.word(start, line, col)
            elif c.isdigit():
                self.number(start, line, col)
            elif c == "'":
                self.char_lit(start, line, col)
            elif c == '"':
                self.string_lit(start, line, col)
            else:
                for op in OPERATORS:
                    if self.src.startswith(op, self.pos):
                        self.advance(len(op))
                        self.tokens.append(Token("op", op, self.span_from(start, line, col)))
                        break
                else:
                    self.advance()
                    self.error(start, line, col, f"unexpected character {c!r}", "bad-char")
        return self.tokens

    def skip_trivia(self) -> None:
        while self.pos < len(self.src):
            c = self.peek()
            if c in " \t\r\n\f\v":
                self.advance()
            elif c == "/" and self.peek(1) == "/":
                while self.pos < len(self.src) and self.peek() != "\n":
                    self.advance()
            elif c == "/" and self.peek(1) == "*":
                start, line, col = self.pos, self.line, self.col
                depth = 0
                while True:
                    if self.pos >= len(self.src):
                        self.error(start, line, col, "unterminated comment", "unterminated-comment")
                    if self.peek() == "/" and self.peek(1) == "*":
                        depth += 1
                        self.advance(2)
                    elif self.peek() == "*" and self.peek(1) == "/":
                        depth -= 1
                        self.advance(2)
                        if depth == 0:
                            break
                    else:
                        self.advance()
            else:
                return

    def word(self, start, line, col) -> None:
        while self.peek() and (self.peek().isalnum() and self.peek().isascii() or self.peek() == "_"):
            self.advance()
        text = self.src[start:self.pos]
        span = self.span_from(start, line, col)
        if text in ("true", "false"):
            self.tokens.append(Token("boolean", text, span, text == "true"))
        elif text in KEYWORDS:
            self.tokens.append(Token("kw", text, span))
        else:
            self.tokens.append(Token("id", text, span))

    def number(self, start, line, col) -> None:
        while self.peek().isdigit():
            self.advance()
        is_float = False
        if self.peek() == "." and self.peek(1).isdigit():
            is_float = True
            self.advance()
            while self.peek().isdigit():
                self.advance()
        elif self.peek() == "." and self.peek(1) == "d" and not _ident_char(self.peek(2)):
            is_float = True
            self.advance()
        if self.peek() in ("E", "e"):
            k = 1
            if self.peek(1) in ("+", "-"):
                k = 2
            if self.peek(k).isdigit():
                is_float = True
                self.advance(k)
                while self.peek().isdigit():
                    self.advance()
        suffix = ""
        if self.peek() in ("b", "i", "L", "r", "d") and not _ident_char(self.peek(1)):
            suffix = self.peek()
            self.advance()
        if _ident_char(self.peek()):
            while _ident_char(self.peek()):
                self.advance()
            self.error(start, line, col, "malformed number literal", "bad-number")
        text = self.src[start:self.pos]
        digits = text[:-1] if suffix else text
        span = self.span_from(start, line, col)
        if is_float:
            if suffix in ("b", "i", "L"):
                self.error(start, line, col, f"suffix '{suffix}' on a floating point literal", "bad-number")
            if digits.endswith("."):
                digits += "0"
            value = float(digits)
            if suffix == "d":
                self.tokens.append(Token("double", text, span, value))
            else:
                v32 = to_float32(value)
                if v32 in (float("inf"), float("-inf")):
                    self.error(start, line, col, "real literal out of range", "bad-number")
                self.tokens.append(Token("real", text, span, v32))
            return
        value = int(digits)
        if suffix == "b":
            if value > 255:
                self.error(start, line, col, "byte literal out of range", "bad-number")
            self.tokens.append(Token("byte", text, span, value))
        elif suffix == "L":
            if value > LONG_MAX:
                self.error(start, line, col, "long literal out of range", "bad-number")
            self.tokens.append(Token("long", text, span, value))
        elif suffix == "r":
            self.tokens.append(Token("real", text, span, to_float32(float(value))))
        elif suffix == "d":
            self.tokens.append(Token("double", text, span, float(value)))
        else:
            if value > INT_MAX:
                self.error(start, line, col, "integer literal out of range", "bad-number")
            self.tokens.append(Token("integer", text, span, value))

    def escape(self, start, line, col) -> str:
        # positioned on the backslash
        self.advance()
        c = self.peek()
        if c in ESCAPES:
            self.advance()
            return ESCAPES[c]
        if c == "x":
            hexd = self.src[self.pos + 1:self.pos + 3]
            if len(hexd) == 2 and all(h in "0123456789abcdefABCDEF" for h in hexd):
                self.advance(3)
                return chr(int(hexd, 16))
        self.advance()
        self.error(start, line, col, f"bad escape sequence '\\{c}'", "bad-escape")

    def char_lit(self, start, line, col) -> None:
        self.advance()
        c = self.peek()
        if c == "" or c == "\n":
            self.error(start, line, col, "unterminated character literal", "unterminated-string")
        if c == "\\":
            ch = self.escape(start, line, col)
        elif c == "'":
            self.advance()
            self.error(start, line, col, "empty character literal", "bad-char")
        else:
            ch = c
            self.advance()
        if self.peek() != "'":
            self.error(start, line, col, "unterminated character literal", "unterminated-string")
        self.advance()
        self.tokens.append(Token("char", self.src[start:self.pos], self.span_from(start, line, col), ch))

    def string_lit(self, start, line, col) -> None:
        self.advance()
        out = []
        while True:
            c = self.peek()
            if c == "" or c == "\n":
                self.error(start, line, col, "unterminated string literal", "unterminated-string")
            if c == '"':
                self.advance()
                break
            if c == "\\":
                out.append(self.escape(start, line, col))
            else:
                out.append(c)
                self.advance()
        self.tokens.append(Token("string", self.src[start:self.pos], self.span_from(start, line, col), "".join(out)))


def _ident_char(c: str) -> bool:
    return bool(c) and (c.isascii() and c.isalnum() or c == "_")


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens. Comments and whitespace are dropped.

    Raises LexError on the first malformed lexeme.
    """
    return _Scanner(source).run()


def case_warnings(tokens: list[Token]) -> list[tuple[Span, str]]:
    """Identifiers that differ from an earlier one only in letter case."""
    seen: dict[str, str] = {}
    warned = set()
    out = []
    for tok in tokens:
        if tok.kind != "id":
            continue
        low = tok.lexeme.lower()
        first = seen.setdefault(low, tok.lexeme)
        if first != tok.lexeme and (first, tok.lexeme) not in warned:
            warned.add((first, tok.lexeme))
            out.append((tok.span, f"identifiers '{first}' and '{tok.lexeme}' differ only in case"))
    return out
