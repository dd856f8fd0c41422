"""IMP2 abstract syntax, parser and canonical printer.

The concrete syntax is fully parenthesized, so there is no precedence to
resolve: every compound form carries its own brackets, except ``not B``
and ``x[N] := A`` which are unambiguous prefix forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Skip", "Assign", "While", "Seq", "If",
    "TrueB", "FalseB", "Eq", "Lt", "And", "Or", "Not",
    "ReadBit", "Lit", "Loc", "Add", "Sub", "Mul",
    "Sentence", "BoolExpr", "ArithExpr",
    "ParseError", "parse", "to_text",
]


# -- arithmetic expressions ---------------------------------------------------

@dataclass(frozen=True)
class ReadBit:
    pass


@dataclass(frozen=True)
class Lit:
    n: int


@dataclass(frozen=True)
class Loc:
    index: int


@dataclass(frozen=True)
class Add:
    l: "ArithExpr"
    r: "ArithExpr"


@dataclass(frozen=True)
class Sub:
    l: "ArithExpr"
    r: "ArithExpr"


@dataclass(frozen=True)
class Mul:
    l: "ArithExpr"
    r: "ArithExpr"


ArithExpr = Union[ReadBit, Lit, Loc, Add, Sub, Mul]


# -- boolean expressions ------------------------------------------------------

@dataclass(frozen=True)
class TrueB:
    pass


@dataclass(frozen=True)
class FalseB:
    pass


@dataclass(frozen=True)
class Eq:
    l: ArithExpr
    r: ArithExpr


@dataclass(frozen=True)
class Lt:
    l: ArithExpr
    r: ArithExpr


@dataclass(frozen=True)
class And:
    l: "BoolExpr"
    r: "BoolExpr"


@dataclass(frozen=True)
class Or:
    l: "BoolExpr"
    r: "BoolExpr"


@dataclass(frozen=True)
class Not:
    e: "BoolExpr"


BoolExpr = Union[TrueB, FalseB, Eq, Lt, And, Or, Not]


# -- sentences ----------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    location: int
    expr: ArithExpr


@dataclass(frozen=True)
class While:
    cond: BoolExpr
    body: "Sentence"


@dataclass(frozen=True)
class Seq:
    first: "Sentence"
    second: "Sentence"


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then_branch: "Sentence"
    else_branch: "Sentence"


Sentence = Union[Skip, Assign, While, Seq, If]


# -- printing -----------------------------------------------------------------

_ARITH_OPS = {Add: "+", Sub: "-", Mul: "*"}
_CMP_OPS = {Eq: "=", Lt: "<"}
_BOOL_OPS = {And: "and", Or: "or"}


def to_text(node) -> str:
    """Render any AST node as single-line canonical concrete syntax."""
    # Iterative post-order keeps very deep trees (huge indices) off the C stack.
    out: list[str] = []
    stack: list = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        t = type(item)
        if t is Skip:
            out.append("skip")
        elif t is Assign:
            stack.append(item.expr)
            out.append(f"x[{item.location}] := ")
        elif t is While:
            stack += [")", item.body, " do ", item.cond]
            out.append("(while ")
        elif t is Seq:
            stack += [")", item.second, " ; ", item.first]
            out.append("(")
        elif t is If:
            stack += [")", item.else_branch, " else ", item.then_branch, " then ", item.cond]
            out.append("(if ")
        elif t is TrueB:
            out.append("true")
        elif t is FalseB:
            out.append("false")
        elif t in _CMP_OPS:
            stack += [")", item.r, f" {_CMP_OPS[t]} ", item.l]
            out.append("(")
        elif t in _BOOL_OPS:
            stack += [")", item.r, f" {_BOOL_OPS[t]} ", item.l]
            out.append("(")
        elif t is Not:
            stack.append(item.e)
            out.append("not ")
        elif t is ReadBit:
            out.append("readbit")
        elif t is Lit:
            out.append(str(item.n))
        elif t is Loc:
            out.append(f"x[{item.index}]")
        elif t in _ARITH_OPS:
            stack += [")", item.r, f" {_ARITH_OPS[t]} ", item.l]
            out.append("(")
        else:
            raise TypeError(f"not an IMP2 node: {item!r}")
    return "".join(out)


# -- parsing ------------------------------------------------------------------

class ParseError(ValueError):
    """Raised on any deviation from the IMP2 grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(:=)|([()\[\];=<+*-])|([0-9]+)|([a-z]+))")
_KEYWORDS = {"skip", "while", "do", "if", "then", "else", "true", "false",
             "and", "or", "not", "readbit", "x"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    end = len(text)
    while True:
        while pos < end and text[pos].isspace():
            pos += 1
        if pos >= end:
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        value = m.group(m.lastindex)
        if m.lastindex == 3:
            if len(value) > 1 and value[0] == "0":
                raise ParseError(f"numeral with leading zero {value!r}", start)
            tokens.append(("num", value, start))
        elif m.lastindex == 4:
            if value not in _KEYWORDS:
                raise ParseError(f"unknown word {value!r}", start)
            tokens.append((value, value, start))
        else:
            tokens.append((value, value, start))
        pos = m.end()
    tokens.append(("eof", "", end))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> str:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)][0]

    def fail(self, expected: str):
        kind, value, offset = self.tokens[self.i]
        found = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected {expected}, found {found}", offset)

    def expect(self, kind: str) -> str:
        if self.peek() != kind:
            self.fail(repr(kind))
        value = self.tokens[self.i][1]
        self.i += 1
        return value

    def numeral(self) -> int:
        if self.peek() != "num":
            self.fail("a numeral")
        return int(self.expect("num"))

    def location(self) -> int:
        self.expect("x")
        self.expect("[")
        n = self.numeral()
        self.expect("]")
        return n

    def sentence(self):
        kind = self.peek()
        if kind == "skip":
            self.i += 1
            return Skip()
        if kind == "x":
            loc = self.location()
            self.expect(":=")
            return Assign(loc, self.arith())
        if kind != "(":
            self.fail("a sentence")
        nxt = self.peek(1)
        if nxt == "while":
            self.i += 2
            cond = self.boolean()
            self.expect("do")
            body = self.sentence()
            self.expect(")")
            return While(cond, body)
        if nxt == "if":
            self.i += 2
            cond = self.boolean()
            self.expect("then")
            then_branch = self.sentence()
            self.expect("else")
            else_branch = self.sentence()
            self.expect(")")
            return If(cond, then_branch, else_branch)
        self.i += 1
        first = self.sentence()
        self.expect(";")
        second = self.sentence()
        self.expect(")")
        return Seq(first, second)

    def boolean(self):
        kind = self.peek()
        if kind == "true":
            self.i += 1
            return TrueB()
        if kind == "false":
            self.i += 1
            return FalseB()
        if kind == "not":
            self.i += 1
            return Not(self.boolean())
        if kind != "(":
            self.fail("a boolean expression")
        # "(" opens either a comparison of arithmetic terms or a connective of
        # boolean terms; the first operand's category decides.
        self.i += 1
        if self._starts_boolean():
            left = self.boolean()
            op = self.peek()
            if op not in ("and", "or"):
                self.fail("'and' or 'or'")
            self.i += 1
            right = self.boolean()
            self.expect(")")
            return And(left, right) if op == "and" else Or(left, right)
        left = self.arith()
        op = self.peek()
        if op not in ("=", "<"):
            self.fail("'=' or '<'")
        self.i += 1
        right = self.arith()
        self.expect(")")
        return Eq(left, right) if op == "=" else Lt(left, right)

    def _starts_boolean(self) -> bool:
        kind = self.peek()
        if kind != "(":
            return kind in ("true", "false", "not")
        # A bracketed operand is boolean iff its top-level operator is.
        depth = 0
        j = self.i
        while True:
            kind = self.tokens[j][0]
            if kind == "(":
                depth += 1
            elif kind == ")":
                depth -= 1
            elif kind == "eof":
                return False
            elif depth == 1:
                if kind in ("=", "<", "and", "or", "true", "false", "not"):
                    return True
                if kind in ("+", "-", "*"):
                    return False
            j += 1

    def arith(self):
        kind = self.peek()
        if kind == "readbit":
            self.i += 1
            return ReadBit()
        if kind == "num":
            return Lit(self.numeral())
        if kind == "x":
            return Loc(self.location())
        if kind != "(":
            self.fail("an arithmetic expression")
        self.i += 1
        left = self.arith()
        op = self.peek()
        if op not in ("+", "-", "*"):
            self.fail("'+', '-' or '*'")
        self.i += 1
        right = self.arith()
        self.expect(")")
        return {"+": Add, "-": Sub, "*": Mul}[op](left, right)


def parse(text: str) -> Sentence:
    """Parse IMP2 concrete syntax into a sentence AST.

    Raises :class:`ParseError` carrying the offending offset.
    """
    p = _Parser(text)
    tree = p.sentence()
    if p.peek() != "eof":
        p.fail("end of input")
    return tree
