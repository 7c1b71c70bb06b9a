"""Text format for surfaces and curves.

Surface grammar (whitespace insensitive)::

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' uint)?
    atom     := rational | 'i' | var | 'conj(' expr ')' | 'Re(' expr ')'
              | 'Im(' expr ')' | 'abs2(' expr ')' | '(' expr ')'
    var      := 'z' uint
    rational := uint ('/' uint)?

Re, Im and abs2 are eliminated during parsing, so the result is a single
canonical coefficient map; parsing then checks real-valuedness.  Curves are
semicolon-separated polynomials in ``t`` with Gaussian-rational
coefficients, e.g. ``0; t^3; t^2``.
"""
from __future__ import annotations

import re as _re
from fractions import Fraction

from .curves import UPoly, u_add, u_mul, u_scale
from .errors import HermitianError, SurfaceSyntaxError
from .poly import ComplexPolynomial, HermitianPolynomial, abs2, im_part, re_part
from .rational import GaussianRational, ONE

_TOKEN = _re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*^();]))"
)
_FUNCTIONS = ("conj", "Re", "Im", "abs2")


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SurfaceSyntaxError(f"unexpected character {text[at]!r}", at)
        if m.group("num") is not None:
            out.append(_Token("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            out.append(_Token("name", m.group("name"), m.start("name")))
        else:
            out.append(_Token(m.group("op"), m.group("op"), m.start("op")))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    """Recursive-descent core, shared by the surface and curve readers."""

    def __init__(self, text: str, atoms):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.atoms = atoms  # semantic callbacks

    def peek(self) -> _Token:
        return self.tokens[self.k]

    def next(self) -> _Token:
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise SurfaceSyntaxError(
                f"expected {kind!r}, found {tok.text!r}" if tok.text else f"expected {kind!r}",
                tok.pos,
            )
        return self.next()

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise SurfaceSyntaxError(f"unexpected trailing {tok.text!r}", tok.pos)
        return value

    def expr(self):
        negate = False
        if self.peek().kind == "-":
            self.next()
            negate = True
        value = self.term()
        if negate:
            value = self.atoms.neg(value)
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            rhs = self.term()
            value = self.atoms.add(value, rhs) if op == "+" else self.atoms.sub(value, rhs)
        return value

    def term(self):
        value = self.factor()
        while self.peek().kind == "*":
            self.next()
            value = self.atoms.mul(value, self.factor())
        return value

    def factor(self):
        value = self.atom()
        if self.peek().kind == "^":
            self.next()
            tok = self.expect("num")
            if "/" in tok.text:
                raise SurfaceSyntaxError("exponent must be a plain integer", tok.pos)
            value = self.atoms.pow(value, int(tok.text))
        return value

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return self.atoms.rational(Fraction(tok.text))
        if tok.kind == "(":
            self.next()
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "name":
            self.next()
            if tok.text == "i":
                return self.atoms.imaginary()
            if tok.text in _FUNCTIONS:
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return self.atoms.function(tok.text, inner, tok.pos)
            return self.atoms.variable(tok.text, tok.pos)
        raise SurfaceSyntaxError(
            f"expected a value, found {tok.text!r}" if tok.text else "unexpected end of input",
            tok.pos,
        )


class _SurfaceAtoms:
    def __init__(self, n: int):
        self.n = n

    def rational(self, q: Fraction):
        return ComplexPolynomial.constant(self.n, GaussianRational(q))

    def imaginary(self):
        return ComplexPolynomial.constant(self.n, GaussianRational(0, 1))

    def variable(self, name: str, pos: int):
        m = _re.fullmatch(r"z(\d+)", name)
        if m is None:
            raise SurfaceSyntaxError(f"unknown variable {name!r}", pos)
        return ComplexPolynomial.variable(self.n, int(m.group(1)))

    def function(self, name: str, inner, pos: int):
        if name == "conj":
            return inner.conjugate()
        if name == "Re":
            return re_part(inner)
        if name == "Im":
            return im_part(inner)
        return abs2(inner)

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)
    pow = staticmethod(lambda a, k: a**k)


class _CurveAtoms:
    def rational(self, q: Fraction) -> UPoly:
        return {0: GaussianRational(q)} if q else {}

    def imaginary(self) -> UPoly:
        return {0: GaussianRational(0, 1)}

    def variable(self, name: str, pos: int) -> UPoly:
        if name != "t":
            raise SurfaceSyntaxError(
                f"curve components are polynomials in t; found {name!r}", pos
            )
        return {1: ONE}

    def function(self, name, inner, pos):
        raise SurfaceSyntaxError(f"{name} is not allowed in curve components", pos)

    add = staticmethod(u_add)

    @staticmethod
    def sub(a: UPoly, b: UPoly) -> UPoly:
        return u_add(a, u_scale(b, -1))

    mul = staticmethod(lambda a, b: u_mul(a, b))

    @staticmethod
    def neg(a: UPoly) -> UPoly:
        return u_scale(a, -1)

    @staticmethod
    def pow(a: UPoly, k: int) -> UPoly:
        out: UPoly = {0: ONE}
        for _ in range(k):
            out = u_mul(out, a)
        return out


def _max_variable_index(text: str) -> int:
    best = 0
    for tok in _tokenize(text):
        if tok.kind == "name":
            m = _re.fullmatch(r"z(\d+)", tok.text)
            if m:
                idx = int(m.group(1))
                if idx < 1:
                    raise SurfaceSyntaxError("variable indices start at 1", tok.pos)
                best = max(best, idx)
    return best


def parse_surface(text: str, dimension: int | None = None) -> HermitianPolynomial:
    """Parse a defining-function expression into its canonical coefficient map.

    The dimension defaults to the largest variable index appearing in the
    text.  Raises :class:`SurfaceSyntaxError` with an offset on bad syntax
    and :class:`HermitianError` when the expression is not real-valued.
    """
    seen = _max_variable_index(text)
    n = dimension if dimension is not None else seen
    if n < 1:
        raise SurfaceSyntaxError("no variables in surface expression", 0)
    if seen > n:
        raise SurfaceSyntaxError(f"variable z{seen} exceeds dimension {n}", 0)
    poly = _Parser(text, _SurfaceAtoms(n)).parse()
    if not poly.is_hermitian():
        raise HermitianError("surface expression is not real-valued")
    return poly.as_hermitian()


def parse_curve_components(text: str) -> list[UPoly]:
    """Parse 'p1; p2; ...' into sparse component polynomials in t."""
    pieces = text.split(";")
    out = []
    offset = 0
    for piece in pieces:
        if not piece.strip():
            raise SurfaceSyntaxError("empty curve component", offset)
        try:
            out.append(_Parser(piece, _CurveAtoms()).parse())
        except SurfaceSyntaxError as err:
            raise SurfaceSyntaxError(str(err).rsplit(" (offset", 1)[0], err.position + offset)
        offset += len(piece) + 1
    return out


def print_surface(p: ComplexPolynomial) -> str:
    """Canonical text that re-parses to exactly the same coefficient map."""
    return str(p)
