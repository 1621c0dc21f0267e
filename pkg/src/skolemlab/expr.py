"""Parser for the expression language of elements of K and rational functions in x.

    Expr   := Term (('+' | '-') Term)*
    Term   := Unary (('*' | '/') Unary)*
    Unary  := '-' Unary | Factor
    Factor := Atom ['^' '(' Rational ')' | '^' Integer]
    Atom   := 'x' | 't' | generator symbol | integer | '(' Expr ')'

Rational exponents are accepted only on t, and only when the value group
contains them. Everything is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, ExprSyntaxError, RationalExponentNotAllowed, UnknownSymbol
from .ratfunc import RatFunc
from .valued_field import ValuedElement, ValuedFieldDescriptor, monomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # int | name | op | end
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", start)
            out.append(Token("op", ch, start))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


def _scene_K(scene) -> ValuedFieldDescriptor:
    return scene if isinstance(scene, ValuedFieldDescriptor) else scene.K


class _Parser:
    def __init__(self, src: str, K: ValuedFieldDescriptor, constants: dict | None = None):
        self.src = src
        self.K = K
        self.toks = tokenize(src)
        self.i = 0
        self.uses_x = False
        self.constants = constants or {}

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ExprSyntaxError(f"expected {text!r} (got {what})", tok.pos)
        return tok

    def parse(self):
        if self.peek().kind == "end":
            raise ExprSyntaxError("empty expression", 0)
        val = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.pos)
        return val

    def expr(self):
        val = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            tok = self.take()
            rhs = self.unary()
            if tok.text == "*":
                val = val * rhs
            else:
                if _is_zero(rhs):
                    raise DivisionByZero(f"division by zero at position {tok.pos}")
                val = val / rhs
        return val

    def unary(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            return -self.unary()
        return self.factor()

    def factor(self):
        tok = self.peek()
        base = self.atom()
        if not (self.peek().kind == "op" and self.peek().text == "^"):
            return base
        caret = self.take()
        nxt = self.peek()
        if nxt.kind == "int":
            exp = Fraction(int(self.take().text))
        elif nxt.text == "(":
            self.take()
            exp = self.rational()
            self.expect(")")
        else:
            raise ExprSyntaxError("expected an exponent", nxt.pos)
        if exp.denominator != 1:
            if not (tok.kind == "name" and tok.text == self.K.symbol):
                raise RationalExponentNotAllowed(f"rational exponent {exp} on {self.src[tok.pos:caret.pos].strip()!r}; only {self.K.symbol} may carry one")
            if not self.K.group.contains(exp):
                raise RationalExponentNotAllowed(f"{self.K.symbol}^({exp}) is outside the value group {self.K.group}")
            return monomial(self.K, exp)
        n = int(exp)
        if n < 0 and _is_zero(base):
            raise DivisionByZero(f"zero raised to {n} at position {caret.pos}")
        return base ** n

    def rational(self) -> Fraction:
        sign = 1
        if self.peek().text == "-":
            self.take()
            sign = -1
        tok = self.take()
        if tok.kind != "int":
            raise ExprSyntaxError("expected an integer", tok.pos)
        num = int(tok.text)
        if self.peek().text == "/":
            self.take()
            tok = self.take()
            if tok.kind != "int":
                raise ExprSyntaxError("expected an integer", tok.pos)
            if int(tok.text) == 0:
                raise ExprSyntaxError("zero denominator", tok.pos)
            return sign * Fraction(num, int(tok.text))
        return Fraction(sign * num)

    def atom(self):
        tok = self.take()
        K = self.K
        if tok.kind == "int":
            return K.from_base(int(tok.text))
        if tok.kind == "name":
            if tok.text == "x":
                self.uses_x = True
                return RatFunc.x(K)
            if tok.text == K.symbol:
                return K.t()
            gen = getattr(K.base, "symbol", None)
            if gen and tok.text == gen and K.base.degree > 1:
                return K.from_base(K.base.generator)
            if tok.text in self.constants:
                val = self.constants[tok.text]
                if isinstance(val, RatFunc):
                    self.uses_x = True
                return val
            raise UnknownSymbol(f"unknown symbol {tok.text!r} at position {tok.pos}")
        if tok.kind == "op" and tok.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"unexpected {what}", tok.pos)


def _is_zero(v) -> bool:
    return v.is_zero()


def parse_expr(src: str, scene, constants: dict | None = None):
    """Parse src into a RatFunc when x occurs, otherwise a ValuedElement.

    ``scene`` is a Scene or a ValuedFieldDescriptor. Named constants of a
    scene are available as symbols; extra ``constants`` may be given as
    elements or as source strings.
    """
    K = _scene_K(scene)
    if constants is None:
        constants = getattr(scene, "constants", None)
    else:
        constants = {k: parse_element(v, K) if isinstance(v, str) else v for k, v in constants.items()}
    p = _Parser(src, K, constants)
    val = p.parse()
    if p.uses_x:
        return val if isinstance(val, RatFunc) else RatFunc.const(K, val)
    if isinstance(val, RatFunc):
        return val.num.coeffs[0] / val.den.coeffs[0] if val else K.zero()
    return val


def parse_function(src: str, scene) -> RatFunc:
    """Like parse_expr but always returns a RatFunc."""
    val = parse_expr(src, scene)
    return val if isinstance(val, RatFunc) else RatFunc.const(_scene_K(scene), val)


def parse_element(src: str, scene) -> ValuedElement:
    val = parse_expr(src, scene)
    if isinstance(val, RatFunc):
        raise ExprSyntaxError(f"{src!r} depends on x; an element of K is required", 0)
    return val


def parse_list(src: str, scene, element: bool = False) -> list:
    """Comma-separated expressions (commas inside parentheses are not supported)."""
    parts = [s for s in src.split(",")]
    if any(not s.strip() for s in parts):
        raise ExprSyntaxError("empty item in list", 0)
    f = parse_element if element else parse_function
    return [f(s, scene) for s in parts]
