"""Parser for the canonical token syntax.

Accepts everything `render` produces (and harmless redundant outer
parentheses).  Errors carry the 1-based token position and the tokens that
would have been acceptable there.
"""

from __future__ import annotations

import re

from .errors import InputError
from .syntax import (
    Add, And, Eq, Exists, Expr, Forall, Formula, Iff, Imp, Le, Mul, Not, Or,
    Succ, Term, Var, Zero,
)

_VAR_RE = re.compile(r"^v(\d+)$")
_CONNECTIVES = {"&": And, "|": Or, "->": Imp, "<->": Iff}


class ParseError(InputError, ValueError):
    def __init__(self, position: int, message: str, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"syntax error at token {position}: {message}"
        if expected:
            detail += f" (expected one of: {', '.join(expected)})"
        super().__init__(detail)


class _Fail(Exception):
    pass


class _Parser:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.pos = 0
        self.far_pos = 0
        self.far_expected: set[str] = set()

    # -- cursor helpers

    def peek(self, ahead: int = 0) -> str | None:
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else None

    def fail(self, *expected: str) -> None:
        if self.pos > self.far_pos:
            self.far_pos = self.pos
            self.far_expected = set(expected)
        elif self.pos == self.far_pos:
            self.far_expected.update(expected)
        raise _Fail()

    def eat(self, tok: str) -> None:
        if self.peek() != tok:
            self.fail(tok)
        self.pos += 1

    def error(self) -> ParseError:
        pos = self.far_pos
        got = self.toks[pos] if pos < len(self.toks) else "end of input"
        return ParseError(pos + 1, f"unexpected {got!r}",
                          tuple(sorted(self.far_expected)))

    # -- terms

    def operand(self) -> Term:
        succs = 0
        while self.peek() == "s":
            self.pos += 1
            succs += 1
        tok = self.peek()
        base: Term
        if tok == "0":
            self.pos += 1
            base = Zero()
        elif tok is not None and (m := _VAR_RE.match(tok)):
            self.pos += 1
            base = Var(int(m.group(1)))
        elif tok == "(":
            self.pos += 1
            base = self.term()
            self.eat(")")
        else:
            self.fail("0", "s", "v<i>", "(")
            raise AssertionError
        for _ in range(succs):
            base = Succ(base)
        return base

    def term(self) -> Term:
        left = self.operand()
        tok = self.peek()
        # only commit to the operator when an operand can follow, so a stray
        # trailing op is flagged at its own position
        if tok in ("+", "*") and self._starts_operand(self.peek(1)):
            self.pos += 1
            right = self.operand()
            return (Add if tok == "+" else Mul)(left, right)
        return left

    @staticmethod
    def _starts_operand(tok: str | None) -> bool:
        return tok is not None and (tok in ("0", "s", "(") or _VAR_RE.match(tok) is not None)

    # -- formulas

    def atomic(self) -> Formula:
        left = self.term()
        tok = self.peek()
        if tok == "=":
            self.pos += 1
            return Eq(left, self.term())
        if tok == "<=":
            self.pos += 1
            return Le(left, self.term())
        self.fail("=", "<=")
        raise AssertionError

    def subformula(self) -> Formula:
        self.eat("(")
        f = self.formula()
        self.eat(")")
        return f

    def formula(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.pos += 1
            return Not(self.subformula())
        if tok == "(" and self.peek(1) in ("A", "E"):
            self.pos += 1
            kind = Forall if self.peek() == "A" else Exists
            self.pos += 1
            vtok = self.peek()
            if vtok is None or not (m := _VAR_RE.match(vtok)):
                self.fail("v<i>")
                raise AssertionError
            self.pos += 1
            self.eat(")")
            return kind(int(m.group(1)), self.subformula())
        if tok == "(":
            # parenthesized-operand connective, atomic with a parenthesized
            # term, or redundant outer parentheses; in that order
            saved = self.pos
            try:
                left = self.subformula()
                ctok = self.peek()
                if ctok not in _CONNECTIVES:
                    self.fail("&", "|", "->", "<->")
                self.pos += 1
                return _CONNECTIVES[ctok](left, self.subformula())
            except _Fail:
                self.pos = saved
            try:
                return self.atomic()
            except _Fail:
                self.pos = saved
            return self.subformula()
        return self.atomic()


_SCAN_RE = re.compile(r"\s+|v\d+|<->|->|<=|[0s+*=~&|()AE]")


def _tokenize(text: str) -> list[str]:
    toks: list[str] = []
    i = 0
    while i < len(text):
        m = _SCAN_RE.match(text, i)
        if m is None:
            rest = text[i:].split()
            snippet = rest[0][:12] if rest else text[i]
            raise ParseError(len(toks) + 1, f"unknown token {snippet!r}")
        if not m.group().isspace():
            toks.append(m.group())
        i = m.end()
    return toks


def parse_formula(text: str) -> Formula:
    toks = _tokenize(text)
    p = _Parser(toks)
    try:
        f = p.formula()
        if p.pos != len(toks):
            p.fail("end of input")
    except _Fail:
        raise p.error() from None
    return f


def parse_term(text: str) -> Term:
    toks = _tokenize(text)
    p = _Parser(toks)
    try:
        t = p.term()
        if p.pos != len(toks):
            p.fail("end of input")
    except _Fail:
        raise p.error() from None
    return t


def parse(text: str) -> Expr:
    """Parse a formula or, failing that, a term; report the deeper error."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError(1, "empty input")
    fp = _Parser(toks)
    try:
        f = fp.formula()
        if fp.pos != len(toks):
            fp.fail("end of input")
        return f
    except _Fail:
        pass
    tp = _Parser(toks)
    try:
        t = tp.term()
        if tp.pos != len(toks):
            tp.fail("end of input")
        return t
    except _Fail:
        pass
    raise (fp if fp.far_pos >= tp.far_pos else tp).error()
