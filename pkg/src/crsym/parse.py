"""Reading and printing defining functions.

Grammar (ASCII; ``zb`` stands for z-bar)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := INT ['/' INT] | VAR | '(' expr ')'

Inside parentheses the token ``i`` is the imaginary unit, and a number may be
followed directly by ``i`` (``(1+1/4i)``).  Outside parentheses ``i`` is not
a token, which keeps coefficients visually separate from variables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import NotFiniteType, ParseError, RealityViolation
from .scalars import ONE, GaussianRational, Q
from .series import WeightedSeries, unmatched_conjugates

SURFACE_VARS = {"z": (1, 0, 0), "zb": (0, 1, 0), "u": (0, 0, 1)}
MAP_VARS = {"z": (1, 0, 0), "w": (0, 0, 1)}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    pos: int
    glued: bool  # no whitespace between this token and the previous one


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        glued = start == pos
        if m.group(1) is not None:
            toks.append(_Tok("num", m.group(1), start, glued))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), start, glued))
        elif m.group(3) is not None:
            toks.append(_Tok("op", m.group(3), start, glued))
        pos = m.end()
    toks.append(_Tok("end", "", len(text), False))
    return toks


def _line_col(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, variables: Mapping):
        self.text = text
        self.vars = variables
        self.toks = _tokenize(text)
        self.i = 0
        self.depth = 0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, *_line_col(self.text, tok.pos))

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        if self.tok.text != text or self.tok.kind != "op":
            self.error(f"expected '{text}'")
        return self.take()

    def parse(self) -> dict:
        if self.tok.kind == "end":
            self.error("empty expression")
        poly = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return poly

    def expr(self) -> dict:
        sign = 1
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.take().text == "-" else 1
        acc = _scale(self.term(), sign)
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            acc = _add(acc, _scale(self.term(), sign))
        return acc

    def term(self) -> dict:
        acc = self.factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def factor(self) -> dict:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            t = self.tok
            if t.kind != "num":
                self.error("exponent must be a nonnegative integer")
            self.take()
            out = {(0, 0, 0): ONE}
            for _ in range(int(t.text)):
                out = _mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        t = self.tok
        if t.kind == "num":
            self.take()
            value = Q(int(t.text))
            if self.tok.kind == "op" and self.tok.text == "/":
                self.take()
                d = self.tok
                if d.kind != "num":
                    self.error("expected integer denominator")
                self.take()
                if int(d.text) == 0:
                    self.error("zero denominator", d)
                value = value / int(d.text)
            coeff = GaussianRational(value)
            if self.depth and self.tok.kind == "name" and self.tok.text == "i" and self.tok.glued:
                self.take()
                coeff = GaussianRational(0, value)
            return {(0, 0, 0): coeff}
        if t.kind == "name":
            self.take()
            if t.text == "i":
                if not self.depth:
                    self.error("imaginary unit 'i' is only allowed inside parentheses", t)
                return {(0, 0, 0): GaussianRational(0, 1)}
            if t.text not in self.vars:
                self.error(f"unknown variable {t.text!r} (expected one of {', '.join(self.vars)})", t)
            return {tuple(self.vars[t.text]): ONE}
        if t.kind == "op" and t.text == "(":
            self.take()
            self.depth += 1
            inner = self.expr()
            self.depth -= 1
            self.expect(")")
            return inner
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.text!r}")


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for i, v in b.items():
        s = out.get(i)
        s = v if s is None else s + v
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def _scale(a: dict, s: int) -> dict:
    return a if s == 1 else {i: -v for i, v in a.items()}


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            key = (i[0] + j[0], i[1] + j[1], i[2] + j[2])
            out[key] = out.get(key, GaussianRational()) + x * y
    return {i: v for i, v in out.items() if v}


def parse_polynomial(text: str, variables: Mapping = SURFACE_VARS) -> dict:
    """Parse to an exact ``{(a, b, c): GaussianRational}`` polynomial."""
    return _Parser(text, variables).parse()


def detect_type(poly) -> int:
    """Lowest total degree of a mixed ``z^a zb^b`` term (``a, b >= 1``) without ``u``."""
    items = poly.items() if isinstance(poly, Mapping) else poly.items()
    degrees = [a + b for (a, b, c), v in items if a >= 1 and b >= 1 and c == 0 and v]
    if not degrees:
        raise NotFiniteType("no mixed z/zb term without u: the point is not of finite type "
                            "(within the given terms)")
    return min(degrees)


@dataclass(frozen=True)
class SurfaceSpec:
    expression: str
    truncation: int
    declared_k: int | None = None


def parse_surface(text: str, truncation: int | None = None,
                  declared_k: int | None = None):
    """Parse a defining function ``v = F`` given as an expression in z, zb, u.

    Returns ``(SurfaceSpec, WeightedSeries)``.  The grading ``k`` is the
    declared one or else the detected type; the default truncation is ``4k``.
    """
    poly = parse_polynomial(text, SURFACE_VARS)
    k = declared_k if declared_k is not None else detect_type(poly)
    W = truncation if truncation is not None else 4 * k
    full = WeightedSeries(poly, k, max([W] + [a + b + k * c for (a, b, c) in poly]))
    bad = unmatched_conjugates(full)
    if bad:
        raise RealityViolation(bad)
    series = full.truncate(W)
    return SurfaceSpec(text, W, declared_k), series


def _monomial_text(exps, names) -> list:
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return parts


def _format_terms(items, names) -> str:
    if not items:
        return "0"
    out = []
    for n, (exps, v) in enumerate(items):
        mono = _monomial_text(exps, names)
        neg = v.im == 0 and v.re < 0
        mag = -v if neg else v
        if mono and mag == ONE:
            body = "*".join(mono)
        else:
            body = "*".join([str(mag)] + mono)
        if n == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_series(s: WeightedSeries) -> str:
    """Canonical text of a series; ``parse_polynomial`` reads it back exactly."""
    return _format_terms(s.items(), ("z", "zb", "u"))


def format_holo(coeffs: Mapping, k: int | None = None) -> str:
    key = (lambda ij: (ij[0] + k * ij[1], ij[1], ij[0])) if k else (lambda ij: (ij[1], ij[0]))
    items = [((i, j), coeffs[(i, j)]) for (i, j) in sorted(coeffs, key=key)]
    return _format_terms(items, ("z", "w"))


def parse_map(f_text: str, g_text: str, k: int, W: int):
    """Parse a holomorphic map given by expressions in ``z`` and ``w``."""
    from .series import HoloMapPair

    f = parse_polynomial(f_text, MAP_VARS)
    g = parse_polynomial(g_text, MAP_VARS)
    return HoloMapPair({(a, c): v for (a, b, c), v in f.items()},
                       {(a, c): v for (a, b, c), v in g.items()}, k, W)
