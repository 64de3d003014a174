"""Free Z2- and Z-graded algebra on the loop generators over Q(q).

A word is a tuple of :class:`Generator`; an :class:`Element` is a finite linear
combination of words with :class:`~qasa.scalars.QScalar` coefficients.  No
relations are imposed here; see :mod:`qasa.rewrite` for that.
"""

from __future__ import annotations

import itertools
from math import factorial
from typing import Iterable, NamedTuple

from .rootdata import RootDatum, RootDatumError, positive_roots
from .scalars import ONE, ZERO, QScalar, _coerce

__all__ = [
    "XM", "H", "K", "CH", "D", "XP", "KIND_NAMES",
    "Generator", "Element", "LoopAlgebra", "GradingError",
    "Xp", "Xm", "Kgen", "Hgen", "Chalf", "Dgen",
    "generator_parity", "word_parity", "word_degree",
]

# class ranks; the canonical block order is X^- < h < K < C^{1/2} < D < X^+
XM, H, K, CH, D, XP = range(6)
KIND_NAMES = {XM: "XMinus", H: "H", K: "K", CH: "CHalf", D: "Dgen", XP: "XPlus"}


class GradingError(ValueError):
    """Raised when an operation needs a homogeneous element."""


class Generator(NamedTuple):
    """A loop generator.

    ``kind`` is one of the class ranks; ``i`` is the node (0 for C and D);
    ``n`` is the loop index for X and h, and the exponent sign for K, C, D.
    """

    kind: int
    i: int
    n: int

    @property
    def degree(self) -> int:
        return self.n if self.kind in (XM, XP, H) else 0

    def __repr__(self):
        from .expr import format_generator
        return format_generator(self)


def Xp(i: int, n: int) -> Generator:
    return Generator(XP, i, n)


def Xm(i: int, n: int) -> Generator:
    return Generator(XM, i, n)


def Kgen(i: int, e: int = 1) -> Generator:
    if e not in (1, -1):
        raise ValueError("K exponent must be +1 or -1")
    return Generator(K, i, e)


def Hgen(i: int, s: int) -> Generator:
    if s == 0:
        raise ValueError("h_i(s) requires s != 0")
    return Generator(H, i, s)


def Chalf(e: int = 1) -> Generator:
    if e not in (1, -1):
        raise ValueError("C^{1/2} exponent must be +1 or -1")
    return Generator(CH, 0, e)


def Dgen(e: int = 1) -> Generator:
    if e not in (1, -1):
        raise ValueError("D exponent must be +1 or -1")
    return Generator(D, 0, e)


def generator_parity(rd: RootDatum, g: Generator) -> int:
    """1 for X^{+-}_M(n), 0 for everything else."""
    return 1 if g.kind in (XM, XP) and g.i == rd.M else 0


def word_parity(rd: RootDatum, word: tuple) -> int:
    M = rd.M
    return sum(1 for g in word if g.kind in (XM, XP) and g.i == M) & 1


def word_degree(word: tuple) -> int:
    return sum(g.degree for g in word)


class Element:
    """Immutable linear combination ``{word: coefficient}`` in the free algebra."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, Generator):
            terms = {(terms,): ONE}
        elif isinstance(terms, tuple):
            terms = {terms: ONE}
        elif not isinstance(terms, dict):
            c = _coerce(terms)
            terms = {(): c} if c else {}
        else:
            terms = {w: _coerce(c) for w, c in terms.items()}
            terms = {w: c for w, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict) -> "Element":
        e = cls.__new__(cls)
        e.terms = terms
        e._hash = None
        return e

    @classmethod
    def word(cls, *gens: Generator) -> "Element":
        return cls._from_clean({tuple(gens): ONE})

    @classmethod
    def scalar(cls, c) -> "Element":
        return cls(c)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, word: tuple) -> QScalar:
        return self.terms.get(tuple(word), ZERO)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __eq__(self, other):
        if not isinstance(other, Element):
            try:
                other = Element(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = _as_element(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
        return Element._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return Element._from_clean({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_element(other))

    def __rsub__(self, other):
        return _as_element(other) - self

    def scale(self, c) -> "Element":
        c = _coerce(c)
        if not c:
            return Element()
        if c == ONE:
            return self
        return Element._from_clean({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    c = c1 * c2
                    v = out.get(w)
                    if v is None:
                        out[w] = c
                    else:
                        v = v + c
                        if v:
                            out[w] = v
                        else:
                            del out[w]
            return Element._from_clean(out)
        if isinstance(other, Generator):
            return self * Element(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Generator):
            return Element(other) * self
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in the free algebra")
        out = Element(ONE)
        for _ in range(k):
            out = out * self
        return out

    # gradings
    def degrees(self) -> set:
        return {word_degree(w) for w in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise GradingError("element is not Z-homogeneous")
        return ds.pop()

    def parities(self, rd: RootDatum) -> set:
        return {word_parity(rd, w) for w in self.terms}

    def parity(self, rd: RootDatum) -> int:
        """Parity of a homogeneous element; zero counts as even."""
        ps = self.parities(rd)
        if not ps:
            return 0
        if len(ps) != 1:
            raise GradingError("element is not Z2-homogeneous")
        return ps.pop()

    def is_homogeneous(self, rd: RootDatum) -> bool:
        return len(self.parities(rd)) <= 1 and len(self.degrees()) <= 1

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def generators(self) -> set:
        return {g for w in self.terms for g in w}

    def __str__(self):
        from .expr import format_element
        return format_element(self)

    def __repr__(self):
        return f"Element({self})"


def _as_element(x) -> Element:
    if isinstance(x, Element):
        return x
    if isinstance(x, Generator):
        return Element(x)
    return Element(x)


def as_element(x) -> Element:
    return _as_element(x)


class LoopAlgebra:
    """Operations in the free algebra that need the root datum."""

    def __init__(self, rd: RootDatum):
        self.rd = rd

    def parity(self, x) -> int:
        return _as_element(x).parity(self.rd)

    def check_generator(self, g: Generator) -> None:
        if g.kind in (XM, XP, H, K):
            self.rd.check_index(g.i)

    def qbracket(self, a, b, u=1) -> Element:
        """``[a, b]_u = ab - (-1)^{|a||b|} u ba``."""
        a = _as_element(a)
        b = _as_element(b)
        u = _coerce(u)
        if not u:
            raise ValueError("q-bracket parameter must be nonzero")
        sign = -1 if (a.parity(self.rd) & b.parity(self.rd)) else 1
        return a * b - (b * a).scale(u * sign)

    def composite_root_vector(self, i: int, j: int, n: int, sign: int = 1) -> Element:
        """``X^+_{i,j}(n) = [...[X^+_i(n), X^+_{i+1}(0)]_{q_{i+1}}, ...]_{q_j}``.

        With ``sign=-1`` the same nesting of X^- letters uses ``q_k^{-1}``.
        """
        rd = self.rd
        rd.check_index(i)
        rd.check_index(j)
        if i > j:
            raise RootDatumError(f"composite root vector needs i <= j, got ({i}, {j})")
        kind = XP if sign > 0 else XM
        x = Element.word(Generator(kind, i, n))
        for k in range(i + 1, j + 1):
            u = QScalar.qpow(sign * rd.q_exp(k))
            x = self.qbracket(x, Element.word(Generator(kind, k, 0)), u)
        return x

    def phi(self, i: int, sign: int, r: int) -> Element:
        """Coefficient ``phi^{+-}_i(r)`` expanded into K and h words.

        ``sum_r phi^+_i(r) z^r = K_i exp((q_i - q_i^{-1}) sum_{s>0} h_i(s) z^s)`` and
        ``sum_r phi^-_i(r) z^r = K_i^{-1} exp(-(q_i - q_i^{-1}) sum_{s>0} h_i(-s) z^{-s})``.
        """
        rd = self.rd
        rd.check_index(i)
        k = sign * r
        if k < 0:
            return Element()
        qi = rd.q_i(i)
        c = (qi - qi.inverse()) * sign
        kw = (Generator(K, i, sign),)
        out: dict = {}
        for part in _partitions(k):
            # part: multiplicities {s: m_s}; h(s) letters sorted by loop index
            coeff = ONE
            word = kw
            for s in sorted(part, key=lambda s: sign * s):
                m = part[s]
                coeff = coeff * (c ** m) / factorial(m)
                word = word + (Generator(H, i, sign * s),) * m
            out[word] = coeff
        return Element(out)

    def central_power(self, half_units: int) -> Element:
        """``C^{half_units / 2}`` as a word in C^{+-1/2}."""
        g = Generator(CH, 0, 1 if half_units > 0 else -1)
        return Element.word(*([g] * abs(half_units)))

    def pbw_monomials(self, factors: int, n_bound: int, multiplicities: dict | None = None) -> list:
        """Ordered products of composite root vectors.

        Enumerates words ``prod_{beta_ab increasing} prod_{k} X^+_{a,b}(n_k)`` with
        ``|n_k| <= n_bound``.  Either ``factors`` fixes the total number of factors, or
        ``multiplicities`` maps segments (a, b) to exact counts.  Returns a list of
        ``(labels, Element)`` with labels a tuple of ``(a, b, n)``.
        """
        roots = positive_roots(self.rd)
        ns = list(range(-n_bound, n_bound + 1))
        if multiplicities is not None:
            shapes = [tuple(multiplicities.get(r, 0) for r in roots)]
        else:
            shapes = [c for c in _compositions(factors, len(roots))]
        out = []
        for shape in shapes:
            blocks = []
            for r, c in zip(roots, shape):
                if c:
                    blocks.append([tuple((r[0], r[1], n) for n in seq)
                                   for seq in itertools.product(ns, repeat=c)])
            for combo in itertools.product(*blocks):
                labels = tuple(lab for blk in combo for lab in blk)
                el = Element(ONE)
                for a, b, n in labels:
                    el = el * self.composite_root_vector(a, b, n)
                out.append((labels, el))
        return out


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, in reverse lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _partitions(k: int):
    """Partitions of k as multiplicity dicts {part: count}."""
    if k == 0:
        yield {}
        return

    def rec(rem, maxp):
        if rem == 0:
            yield {}
            return
        for p in range(min(rem, maxp), 0, -1):
            for rest in rec(rem - p, p):
                d = dict(rest)
                d[p] = d.get(p, 0) + 1
                yield d

    yield from rec(k, k)


def sum_elements(items: Iterable) -> Element:
    out: dict = {}
    for e in items:
        for w, c in _as_element(e).terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
    return Element._from_clean(out)
