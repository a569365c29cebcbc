"""Recursive-descent parser for the formula grammar.

ASCII connectives ``/\\ \\/ -> <- <-> - ~`` with ``T``/``F`` for ⊤/⊥;
the Unicode symbols ∧ ∨ → ← ↔ ¬ ∼ ⊤ ⊥ are accepted as aliases.  Binding
strength, tightest first: prefix ``-`` and ``~``, ``/\\``, ``\\/``, then
``->``/``<-`` (right associative), then ``<->`` (non-associative).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

from .formula import (BOTTOM, TOP, Coimpl, CoNeg, Conj, Disj, Formula, Iff,
                      Impl, Neg, Var)

__all__ = ["ParseError", "parse", "parse_sequent", "tokenize"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_ALIASES = {
    "∧": "/\\", "∨": "\\/", "→": "->", "←": "<-", "↔": "<->",
    "¬": "-", "∼": "~", "⊤": "T", "⊥": "F", "⊢": "|-",
}
# longest match first
_OPERATORS = ["<->", "|-", "->", "<-", "/\\", "\\/", "-", "~", "(", ")", ","]
_IDENT = re.compile(r"[a-z][a-z0-9_]*")


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch in _ALIASES:
            tokens.append(Token(_ALIASES[ch], ch, line, col))
            col, i = col + 1, i + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(Token("var", m.group(), line, col))
            n = m.end() - i
            col, i = col + n, i + n
            continue
        if ch in "TF" and not (i + 1 < len(text) and (text[i + 1].isalnum() or text[i + 1] == "_")):
            tokens.append(Token(ch, ch, line, col))
            col, i = col + 1, i + 1
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token(op, op, line, col))
                col, i = col + len(op), i + len(op)
                break
        else:
            raise ParseError(f"unknown token {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"syntax error: expected {expected}, found {found}", t.line, t.column)

    def expect(self, kind: str):
        if self.tok.kind != kind:
            self.fail(repr(kind))
        return self.advance()

    def iff(self) -> Formula:
        left = self.imp()
        if self.tok.kind == "<->":
            self.advance()
            right = self.imp()
            if self.tok.kind == "<->":
                self.fail("a parenthesis around the chained '<->'")
            return Iff(left, right)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.tok.kind in ("->", "<-"):
            op = self.advance().kind
            right = self.imp()
            return Impl(left, right) if op == "->" else Coimpl(left, right)
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.tok.kind == "\\/":
            self.advance()
            out = Disj(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.tok.kind == "/\\":
            self.advance()
            out = Conj(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind = self.tok.kind
        if kind == "-":
            self.advance()
            return Neg(self.unary())
        if kind == "~":
            self.advance()
            return CoNeg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "var":
            self.advance()
            return Var(t.text)
        if t.kind == "T":
            self.advance()
            return TOP
        if t.kind == "F":
            self.advance()
            return BOTTOM
        if t.kind == "(":
            self.advance()
            inner = self.iff()
            self.expect(")")
            return inner
        self.fail("a formula")


def parse(text: str) -> Formula:
    p = _Parser(text)
    phi = p.iff()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return phi


def parse_sequent(text: str) -> Tuple[List[Formula], Formula]:
    """Parse ``A1, A2, ... |- G``; the assumption list may be empty."""
    p = _Parser(text)
    assumptions = []
    if p.tok.kind != "|-":
        assumptions.append(p.iff())
        while p.tok.kind == ",":
            p.advance()
            assumptions.append(p.iff())
    p.expect("|-")
    goal = p.iff()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return assumptions, goal
