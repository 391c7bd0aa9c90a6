"""Parsing and printing of noncommutative polynomial expressions.

Grammar (whitespace insignificant, products never implicit)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := rational ['*' factor ('*' factor)*]
              | [rational ['*']] factor ('*' factor)*
    factor   := name ['^' uint]
    rational := uint ['/' uint]

Products are noncommutative and keep the written order.  A bare rational
is accepted as a constant term so that printed output always parses back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .rational import Q
from .errors import ParseError, UnknownVariable
from .ncseries import DEFAULT_TRUNC, Series, Word

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Term:
    coeff: Q
    factors: tuple[tuple[str, int], ...]  # (name, power)


@dataclass(frozen=True)
class ExprAST:
    terms: tuple[Term, ...]


def valid_name(name: str) -> bool:
    return bool(_NAME.match(name))


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(src):
            if src[pos:].strip() == "":
                break
            m = _TOKEN.match(src, pos)
            if not m:
                start = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
                raise ParseError(
                    f"unexpected character {src[start]!r}",
                    self._byte(start),
                    ("name", "number", "operator"),
                )
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def _byte(self, char_pos: int) -> int:
        return len(self.src[:char_pos].encode("utf-8"))

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.src))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected: Sequence[str]):
        kind, val, pos = self.peek()
        what = "end of input" if kind == "eof" else repr(val)
        raise ParseError(f"unexpected {what}, expected one of: {', '.join(expected)}", self._byte(pos), tuple(expected))

    def is_op(self, op: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val == op

    def uint(self) -> int:
        kind, val, _ = self.peek()
        if kind != "num":
            self.fail(["unsigned integer"])
        self.take()
        return int(val)

    def rational(self) -> Q:
        num = self.uint()
        if self.is_op("/"):
            self.take()
            kind, val, pos = self.peek()
            den = self.uint()
            if den == 0:
                raise ParseError("division by zero", self._byte(pos), ("nonzero integer",))
            return Q(num, den)
        return Q(num)

    def factor(self) -> tuple[str, int, int]:
        kind, val, pos = self.peek()
        if kind != "name":
            self.fail(["variable"])
        self.take()
        power = 1
        if self.is_op("^"):
            self.take()
            kind2, _, pos2 = self.peek()
            power = self.uint()
            if power < 1:
                raise ParseError("exponent must be >= 1", self._byte(pos2), ("positive integer",))
        return val, power, pos

    def term(self, sign: int) -> tuple[Term, list[tuple[str, int]]]:
        coeff = Q(sign)
        factors = []
        positions = []
        kind, _, _ = self.peek()
        if kind == "num":
            coeff *= self.rational()
            if self.is_op("*"):
                self.take()
            elif self.peek()[0] != "name":
                return Term(coeff, ()), positions
        elif kind != "name":
            self.fail(["number", "variable"])
        name, power, pos = self.factor()
        factors.append((name, power))
        positions.append((name, pos))
        while self.is_op("*"):
            self.take()
            name, power, pos = self.factor()
            factors.append((name, power))
            positions.append((name, pos))
        return Term(coeff, tuple(factors)), positions

    def expr(self) -> tuple[ExprAST, list[tuple[str, int]]]:
        sign = 1
        if self.is_op("-") or self.is_op("+"):
            sign = -1 if self.take()[1] == "-" else 1
        terms = []
        positions = []
        t, p = self.term(sign)
        terms.append(t)
        positions += p
        while self.is_op("+") or self.is_op("-"):
            sign = -1 if self.take()[1] == "-" else 1
            t, p = self.term(sign)
            terms.append(t)
            positions += p
        if self.peek()[0] != "eof":
            self.fail(["'+'", "'-'", "'*'", "end of input"])
        return ExprAST(tuple(terms)), positions


def parse_ast(src: str) -> ExprAST:
    return _Parser(src).expr()[0]


def parse(src: str, names: Sequence[str], trunc: int = DEFAULT_TRUNC) -> Series:
    """Parse ``src`` into a Series over the ordered alphabet ``names``."""
    p = _Parser(src)
    ast, positions = p.expr()
    index = {v: i for i, v in enumerate(names)}
    for name, pos in positions:
        if name not in index:
            raise UnknownVariable(f"unknown variable {name!r}", p._byte(pos), tuple(names))
    terms: dict[Word, Q] = {}
    for t in ast.terms:
        w: Word = ()
        for name, power in t.factors:
            w += (index[name],) * power
        terms[w] = terms.get(w, Q(0)) + t.coeff
    return Series(len(names), trunc, terms)


def format_rational(c: Q) -> str:
    """"p/q" in lowest terms, sign on the numerator; integers print bare."""
    c = Q(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_word(w: Word, names: Sequence[str], powers: bool = True) -> str:
    if not w:
        return "1"
    if not powers:
        return "*".join(names[i] for i in w)
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = j - i
        parts.append(names[w[i]] if k == 1 else f"{names[w[i]]}^{k}")
        i = j
    return "*".join(parts)


def format_series(f: Series, names: Sequence[str]) -> str:
    items = f.sorted_terms()
    if not items:
        return "0"
    out = []
    for idx, (w, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        if not w:
            body = format_rational(a)
        elif a == 1:
            body = format_word(w, names)
        else:
            body = f"{format_rational(a)}*{format_word(w, names)}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
