"""Text syntax for CK elements.

Grammar (juxtaposition is multiplication, postfix ``*`` is the adjoint)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor factor*
    factor := atom ['*']
    atom   := INT ['/' INT] | 'i' | 's' INT | 'e(' word ')' | '(' expr ')'

``1`` is the unit, ``i`` the imaginary unit, ``e(g1 g2')`` the range projection
of a free-group word.
"""

from __future__ import annotations

import re
from fractions import Fraction

from sympy.polys.domains import QQ_I

from ..errors import ExpressionSyntaxError
from ..groups import FreeWord, parse_word
from .algebra import CKAlgebra, CKElement

__all__ = ["parse_expression", "format_element", "format_scalar"]

_TOKENS = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<proj>e\((?P<word>[^()]*)\))
  | (?P<gen>s(?P<idx>\d+))
  | (?P<imag>i)
  | (?P<op>[()+\-*])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "word":  # lastgroup reports the innermost named group
            kind = "proj"
        elif kind == "idx":
            kind = "gen"
        if kind != "ws":
            out.append((kind, m, pos))
        pos = m.end()
    out.append(("end", None, pos))
    return out


class _Parser:
    def __init__(self, text: str, alg: CKAlgebra):
        self.text = text
        self.alg = alg
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def is_op(self, tok, ch):
        return tok[0] == "op" and tok[1].group() == ch

    def parse(self) -> CKElement:
        x = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionSyntaxError(f"unexpected {tok[1].group()!r}", tok[2])
        return x

    def expr(self) -> CKElement:
        sign = 1
        tok = self.peek()
        if self.is_op(tok, "-") or self.is_op(tok, "+"):
            self.take()
            sign = -1 if tok[1].group() == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            tok = self.peek()
            if self.is_op(tok, "+"):
                self.take()
                acc = acc + self.term()
            elif self.is_op(tok, "-"):
                self.take()
                acc = acc - self.term()
            else:
                return acc

    def _starts_factor(self, tok) -> bool:
        return tok[0] in ("num", "proj", "gen", "imag") or self.is_op(tok, "(")

    def term(self) -> CKElement:
        tok = self.peek()
        if not self._starts_factor(tok):
            what = "end of input" if tok[0] == "end" else repr(tok[1].group())
            raise ExpressionSyntaxError(f"expected a factor, got {what}", tok[2])
        acc = self.factor()
        while self._starts_factor(self.peek()):
            acc = acc * self.factor()
        return acc

    def factor(self) -> CKElement:
        x = self.atom()
        while self.is_op(self.peek(), "*"):
            self.take()
            x = x.adjoint()
        return x

    def atom(self) -> CKElement:
        kind, m, pos = self.take()
        alg = self.alg
        if kind == "num":
            return alg.scalar(Fraction(m.group()))
        if kind == "imag":
            return alg.scalar((0, 1))
        if kind == "gen":
            return alg.generator(int(m.group("idx")))
        if kind == "proj":
            return alg.range_projection(parse_word(m.group("word"), alg.n))
        if kind == "op" and m.group() == "(":
            x = self.expr()
            tok = self.take()
            if not self.is_op(tok, ")"):
                raise ExpressionSyntaxError("expected ')'", tok[2])
            return x
        what = "end of input" if kind == "end" else repr(m.group())
        raise ExpressionSyntaxError(f"unexpected {what}", pos)


def parse_expression(text: str, alg: CKAlgebra) -> CKElement:
    """Parse ``text`` into an exact element over ``alg``."""
    return _Parser(text, alg).parse()


def _frac(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c) -> str:
    # output must parse as a single factor
    re_, im = c.x, c.y
    if not im:
        return _frac(re_) if re_ >= 0 else f"(-{_frac(-re_)})"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{_frac(mag)} i"
    if not re_:
        return imag if im > 0 else f"(-{imag})"
    re_s = _frac(re_) if re_ >= 0 else f"-{_frac(-re_)}"
    return f"({re_s} {'+' if im > 0 else '-'} {imag})"


def _format_monomial(m) -> str:
    parts = [f"s{k}" for k in m.mu] + [f"e(g{m.vertex})"] + [f"s{k}*" for k in reversed(m.nu)]
    return " ".join(parts)


def format_element(x: CKElement) -> str:
    if x.is_zero:
        return "0"
    pieces = []
    for m, c in x.sorted_terms():
        neg = not c.y and c.x < 0
        if neg:
            c = -c
        body = _format_monomial(m)
        if c != QQ_I(1, 0):
            body = f"{format_scalar(c)} {body}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)
