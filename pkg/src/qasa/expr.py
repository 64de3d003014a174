"""Text grammar for algebra elements.

Atoms: ``Xp(i,n)``, ``Xm(i,n)``, ``K(i)``, ``Kinv(i)``, ``h(i,s)``, ``C2``,
``C2inv``, ``D``, ``Dinv``, ``qbr(a,b;u)`` for ``[a,b]_u``, integers, ``q``,
parenthesised sub-expressions.  Operators: ``+``, ``-``, ``*`` (juxtaposition
also multiplies), ``^`` with an integer exponent, and ``/`` by a scalar.
An identity line has the form ``LHS == RHS``.
"""

from __future__ import annotations

import re

from .algebra import CH, D, H, K, XM, XP, Element, Generator, LoopAlgebra
from .rootdata import RootDatum
from .scalars import ONE, Q, QScalar, format_scalar

__all__ = ["ExprParseError", "parse_element", "parse_identity", "format_element", "format_generator"]


class ExprParseError(ValueError):
    pass


def format_generator(g: Generator) -> str:
    k = g.kind
    if k == XP:
        return f"Xp({g.i},{g.n})"
    if k == XM:
        return f"Xm({g.i},{g.n})"
    if k == H:
        return f"h({g.i},{g.n})"
    if k == K:
        return f"K({g.i})" if g.n > 0 else f"Kinv({g.i})"
    if k == CH:
        return "C2" if g.n > 0 else "C2inv"
    if k == D:
        return "D" if g.n > 0 else "Dinv"
    raise ValueError(f"unknown generator kind {k}")


def _format_word(word) -> str:
    return "*".join(format_generator(g) for g in word)


def format_element(e: Element) -> str:
    """Deterministic text form; ``parse_element(format_element(e)) == e``."""
    if not e.terms:
        return "0"
    parts = []
    for idx, (w, c) in enumerate(e.sorted_items()):
        neg = False
        mono = len(c.num) == 1 and c.den == (1,)
        if mono and c.num[0] < 0:
            neg = True
            c = -c
        if c == ONE:
            body = _format_word(w) if w else "1"
        else:
            cs = format_scalar(c)
            if not mono:
                cs = f"({cs})"
            body = f"{cs}*{_format_word(w)}" if w else cs
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<name>Xp|Xm|Kinv|K|h|C2inv|C2|Dinv|D|qbr|q)(?![A-Za-z0-9_])|(?P<int>\d+)|(?P<op>==|[-+*/^(),;]))"
)


def _tokenize(text: str):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprParseError(f"unexpected input at {pos}: {text[pos:pos + 20]!r}")
        if m.group("name"):
            toks.append(("name", m.group("name")))
        elif m.group("int"):
            toks.append(("int", m.group("int")))
        else:
            toks.append((m.group("op"), m.group("op")))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, rd: RootDatum | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.rd = rd
        self.alg = LoopAlgebra(rd) if rd is not None else None

    def peek(self, off=0):
        j = self.i + off
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind is not None and tok[0] != kind) or (value is not None and tok[1] != value):
            raise ExprParseError(f"expected {value or kind!r}, got {tok[1]!r}")
        self.i += 1
        return tok[1]

    def at_end(self):
        return self.i >= len(self.toks)

    def signed_int(self) -> int:
        neg = False
        while self.peek()[0] in ("-", "+"):
            if self.take()[0] == "-":
                neg = not neg
        v = int(self.take("int"))
        return -v if neg else v

    def expr(self) -> Element:
        sign = 1
        if self.peek()[0] in ("-", "+"):
            sign = -1 if self.take() == "-" else 1
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek()[0] in ("+", "-"):
            op = self.take()
            t = self.term()
            val = val + t if op == "+" else val - t
        return val

    def term(self) -> Element:
        val = self.power()
        while True:
            k, v = self.peek()
            if k == "*":
                self.take()
                val = val * self.power()
            elif k == "/":
                self.take()
                d = self.power()
                if set(d.terms) != {()}:
                    raise ExprParseError("can only divide by a scalar")
                val = val.scale(ONE / d.terms[()])
            elif k in ("int", "name", "("):
                val = val * self.power()
            else:
                return val

    def power(self) -> Element:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            k = self.signed_int()
            if k < 0:
                if set(base.terms) != {()}:
                    raise ExprParseError("negative powers only apply to scalars")
                return Element(base.terms[()] ** k)
            return base ** k
        return base

    def atom(self) -> Element:
        k, v = self.peek()
        if k == "int":
            self.take()
            return Element(int(v))
        if k == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if k != "name":
            raise ExprParseError(f"unexpected token {v!r}")
        self.take()
        if v == "q":
            return Element(Q)
        if v in ("C2", "C2inv", "D", "Dinv"):
            kind = CH if v.startswith("C") else D
            return Element.word(Generator(kind, 0, -1 if v.endswith("inv") else 1))
        if v in ("K", "Kinv"):
            self.take("(")
            i = self.signed_int()
            self.take(")")
            self._check_index(i)
            return Element.word(Generator(K, i, -1 if v == "Kinv" else 1))
        if v in ("Xp", "Xm", "h"):
            self.take("(")
            i = self.signed_int()
            self.take(",")
            n = self.signed_int()
            self.take(")")
            self._check_index(i)
            if v == "h" and n == 0:
                raise ExprParseError("h(i,s) needs s != 0")
            kind = {"Xp": XP, "Xm": XM, "h": H}[v]
            return Element.word(Generator(kind, i, n))
        if v == "qbr":
            if self.alg is None:
                raise ExprParseError("qbr needs a root datum for parities")
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            u = Element(ONE)
            if self.peek()[0] == ";":
                self.take()
                u = self.expr()
            self.take(")")
            if set(u.terms) != {()}:
                raise ExprParseError("q-bracket parameter must be a scalar")
            return self.alg.qbracket(a, b, u.terms[()])
        raise ExprParseError(f"unknown name {v!r}")

    def _check_index(self, i):
        if self.rd is not None:
            try:
                self.rd.check_index(i)
            except ValueError as exc:
                raise ExprParseError(str(exc)) from None


def parse_element(text: str, rd: RootDatum | None = None) -> Element:
    p = _Parser(text, rd)
    if p.at_end():
        raise ExprParseError("empty expression")
    e = p.expr()
    if not p.at_end():
        raise ExprParseError(f"trailing input: {p.peek()[1]!r}")
    return e


def parse_identity(line: str, rd: RootDatum | None = None) -> tuple:
    """Parse ``LHS == RHS`` into a pair of elements."""
    p = _Parser(line, rd)
    lhs = p.expr()
    p.take("==")
    rhs = p.expr()
    if not p.at_end():
        raise ExprParseError(f"trailing input: {p.peek()[1]!r}")
    return lhs, rhs


def parse_scalar_or_element(text: str) -> QScalar:
    e = parse_element(text)
    if set(e.terms) - {()}:
        raise ExprParseError("expected a scalar")
    return e.terms.get((), QScalar(0))
