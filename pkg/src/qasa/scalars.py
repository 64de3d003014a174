"""Exact arithmetic in the rational function field Q(q).

``q`` is a formal transcendental.  Three types live here:

* :class:`LaurentPoly` -- Laurent polynomial with rational coefficients.
* :class:`QScalar` -- element of Q(q) in a unique reduced form, so that
  equality is equality of representations.
* :class:`TruncSeries` -- truncated formal series in ``z`` (or ``1/z``) with
  :class:`QScalar` coefficients, closed under ``+``, ``*``, exp and log.

The text form of a scalar is ``num`` or ``(num)/(den)`` where ``num`` is a
Laurent polynomial with integer coefficients and ``den`` an integer
polynomial, e.g. ``(q^3-q)/(q^2+1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import _zpoly as zp

__all__ = [
    "LaurentPoly",
    "QScalar",
    "TruncSeries",
    "ScalarParseError",
    "q_integer",
    "q_integer_base",
    "series_exp",
    "series_log",
    "ZERO",
    "ONE",
    "Q",
]


class ScalarParseError(ValueError):
    pass


# --------------------------------------------------------------------------
# Laurent polynomials (public, dict-based)
# --------------------------------------------------------------------------


class LaurentPoly:
    """Laurent polynomial in ``q`` with rational coefficients.

    Stored as ``{exponent: Fraction}`` with zero coefficients removed.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for k, v in items:
                v = Fraction(v)
                if v:
                    c[int(k)] = c.get(int(k), 0) + v
                    if not c[int(k)]:
                        del c[int(k)]
        self._c = c
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def valuation(self) -> int:
        return min(self._c)

    def degree(self) -> int:
        return max(self._c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: dict = {}
        for a, x in self._c.items():
            for b, y in other._c.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient ``self / other``; raises ArithmeticError if not a Laurent polynomial."""
        other = _as_laurent(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        quo = self.to_scalar() / other.to_scalar()
        if not quo.is_laurent():
            raise ArithmeticError("Laurent division is not exact")
        d = quo.den[0]
        return LaurentPoly({quo.e + i: Fraction(c, d) for i, c in enumerate(quo.num)})

    def to_scalar(self) -> "QScalar":
        return QScalar.from_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({self.to_scalar()})"

    def __str__(self):
        return str(self.to_scalar())


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot convert {type(x).__name__} to LaurentPoly")


# --------------------------------------------------------------------------
# Q(q)
# --------------------------------------------------------------------------


def _normalize(e, n, d):
    """Canonical (e, num, den) for q^e * n(q)/d(q)."""
    if not n:
        return 0, zp.ZERO, zp.ONE
    k = zp.low_order(n)
    if k:
        n = n[k:]
        e += k
    k = zp.low_order(d)
    if k:
        d = d[k:]
        e -= k
    if len(d) > 1 and len(n) > 1:
        g = zp.gcd_poly(n, d)
        if g != zp.ONE:
            n = zp.divexact(n, g)
            d = zp.divexact(d, g)
    c = gcd(zp.content(n), zp.content(d))
    if c != 1:
        n = tuple(x // c for x in n)
        d = tuple(x // c for x in d)
    if d[0] < 0:
        n = zp.neg(n)
        d = zp.neg(d)
    return e, n, d


class QScalar:
    """An element ``q^e * num(q) / den(q)`` of Q(q) in canonical form.

    Canonical form: ``num`` and ``den`` are integer polynomials with nonzero
    constant terms, coprime over Q, with coprime integer contents, and the
    constant term of ``den`` is positive.  Instances are immutable.
    """

    __slots__ = ("e", "num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, QScalar):
            self.e, self.num, self.den = value.e, value.num, value.den
        elif isinstance(value, int):
            self.e, self.num, self.den = 0, ((value,) if value else zp.ZERO), zp.ONE
        elif isinstance(value, Fraction):
            self.e, self.num, self.den = _normalize(0, (value.numerator,), (value.denominator,))
        elif isinstance(value, str):
            s = parse_scalar(value)
            self.e, self.num, self.den = s.e, s.num, s.den
        elif isinstance(value, LaurentPoly):
            s = QScalar.from_laurent(value)
            self.e, self.num, self.den = s.e, s.num, s.den
        else:
            raise TypeError(f"cannot build QScalar from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, e, n, d) -> "QScalar":
        obj = object.__new__(cls)
        obj.e = e
        obj.num = n
        obj.den = d
        obj._hash = None
        return obj

    @classmethod
    def make(cls, e, n, d) -> "QScalar":
        if not d or not any(d):
            raise ZeroDivisionError("zero denominator")
        return cls._raw(*_normalize(e, zp.trim(n), zp.trim(d)))

    @classmethod
    def qpow(cls, k: int, c: int = 1) -> "QScalar":
        """``c * q**k``."""
        return _qpow(k, c)

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "QScalar":
        if p.is_zero():
            return ZERO
        lo, hi = p.valuation(), p.degree()
        den = 1
        for v in p._c.values():
            den = den * v.denominator // gcd(den, v.denominator)
        n = tuple(int(p._c.get(lo + i, 0) * den) for i in range(hi - lo + 1))
        return cls.make(lo, n, (den,))

    # ---- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        """True when the value is a Laurent polynomial in q."""
        return len(self.den) == 1

    def is_unit_monomial(self):
        """Return k if self == q**k, else None."""
        if self.den == zp.ONE and self.num == zp.ONE:
            return self.e
        return None

    def numerator(self) -> LaurentPoly:
        return LaurentPoly({self.e + i: c for i, c in enumerate(self.num)})

    def denominator(self) -> LaurentPoly:
        return LaurentPoly({i: c for i, c in enumerate(self.den)})

    def key(self):
        """Deterministic sort key (the canonical representation)."""
        return (self.e, self.num, self.den)

    def evaluate_mod(self, x: int, p: int) -> int:
        """Image under q -> x in GF(p); raises ZeroDivisionError if undefined."""
        dv = zp.evaluate_mod(self.den, x, p)
        if dv == 0:
            raise ZeroDivisionError("denominator vanishes at this specialization")
        nv = zp.evaluate_mod(self.num, x, p)
        return nv * pow(x, self.e % (p - 1), p) * pow(dv, p - 2, p) % p

    # ---- arithmetic -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QScalar):
            if isinstance(other, (int, Fraction)):
                other = QScalar(other)
            else:
                return NotImplemented
        return self.e == other.e and self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.e, self.num, self.den))
        return h

    def __add__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        e1, e2 = self.e, other.e
        e = e1 if e1 < e2 else e2
        a1 = zp.shift(self.num, e1 - e)
        a2 = zp.shift(other.num, e2 - e)
        if self.den == other.den:
            n = zp.add(a1, a2)
            d = self.den
            if not n:
                return ZERO
            if d == zp.ONE:
                k = zp.low_order(n)
                return QScalar._raw(e + k, n[k:] if k else n, d)
            return QScalar._raw(*_normalize(e, n, d))
        n = zp.add(zp.mul(a1, other.den), zp.mul(a2, self.den))
        if not n:
            return ZERO
        return QScalar._raw(*_normalize(e, n, zp.mul(self.den, other.den)))

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw(self.e, zp.neg(self.num), self.den)

    def __sub__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not self.num or not other.num:
            return ZERO
        e = self.e + other.e
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == zp.ONE and d2 == zp.ONE:
            return QScalar._raw(e, zp.mul(n1, n2), zp.ONE)
        if len(d2) > 1 and len(n1) > 1:
            g = zp.gcd_poly(n1, d2)
            if g != zp.ONE:
                n1 = zp.divexact(n1, g)
                d2 = zp.divexact(d2, g)
        if len(d1) > 1 and len(n2) > 1:
            g = zp.gcd_poly(n2, d1)
            if g != zp.ONE:
                n2 = zp.divexact(n2, g)
                d1 = zp.divexact(d1, g)
        n = zp.mul(n1, n2)
        d = zp.mul(d1, d2)
        c = gcd(zp.content(n), zp.content(d))
        if c != 1:
            n = tuple(x // c for x in n)
            d = tuple(x // c for x in d)
        if d[0] < 0:
            n, d = zp.neg(n), zp.neg(d)
        return QScalar._raw(e, n, d)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        n, d = self.den, self.num
        if d[0] < 0:
            n, d = zp.neg(n), zp.neg(d)
        return QScalar._raw(-self.e, n, d)

    def __truediv__(self, other):
        if not isinstance(other, QScalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def substitute_inverse(self) -> "QScalar":
        """Image under the automorphism q -> q^{-1}."""
        dn, dd = len(self.num) - 1, len(self.den) - 1
        return QScalar.make(-self.e - dn + dd, tuple(reversed(self.num)), tuple(reversed(self.den)))

    # ---- text -------------------------------------------------------------

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"QScalar('{format_scalar(self)}')"


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, int):
        return _int_scalar(x)
    if isinstance(x, Fraction):
        return QScalar(x)
    return None


@lru_cache(maxsize=4096)
def _int_scalar(c: int) -> QScalar:
    return QScalar(c)


@lru_cache(maxsize=4096)
def _qpow(k: int, c: int) -> QScalar:
    if c == 0:
        return ZERO
    return QScalar._raw(k, (c,), zp.ONE)


ZERO = QScalar._raw(0, zp.ZERO, zp.ONE)
ONE = QScalar._raw(0, zp.ONE, zp.ONE)
Q = QScalar._raw(1, zp.ONE, zp.ONE)


# --------------------------------------------------------------------------
# quantum integers
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _qint_power(m: int, k: int) -> QScalar:
    if m == 0:
        return ZERO
    sign = 1 if m > 0 else -1
    m = abs(m)
    # [m]_{q^k} = sum_{j=0}^{m-1} q^{k(m-1-2j)}
    step = 2 * abs(k)
    n = [0] * (step * (m - 1) + 1)
    for j in range(m):
        n[step * j] = sign
    return QScalar._raw(-abs(k) * (m - 1), tuple(n), zp.ONE)


def q_integer(m: int) -> QScalar:
    """The quantum integer ``[m]_q = (q^m - q^-m)/(q - q^-1)``."""
    return _qint_power(int(m), 1)


def q_integer_base(m: int, base: QScalar) -> QScalar:
    """``[m]_{base}`` for a base that is a nontrivial power of q."""
    k = base.is_unit_monomial() if isinstance(base, QScalar) else None
    if k is None or k == 0:
        raise ValueError(f"q-integer base must be q^k with k != 0, got {base}")
    return _qint_power(int(m), k)


# --------------------------------------------------------------------------
# text form
# --------------------------------------------------------------------------


def _format_poly(terms) -> str:
    """terms: list of (exponent, int coefficient), highest exponent first."""
    out = []
    for idx, (k, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            var = "q" if k == 1 else f"q^{k}"
            body = var if a == 1 else f"{a}{var}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(sign + body)
    return "".join(out) if out else "0"


def format_scalar(s: QScalar) -> str:
    num = [(s.e + i, c) for i, c in enumerate(s.num) if c]
    num.reverse()
    ns = _format_poly(num)
    if s.den == zp.ONE:
        return ns
    den = [(i, c) for i, c in enumerate(s.den) if c]
    den.reverse()
    return f"({ns})/({_format_poly(den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\^)|(\+)|(-)|(\*)|(/)|(\()|(\)))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarParseError(f"unexpected character at {pos}: {text[pos:]!r}")
        kinds = ("int", "q", "^", "+", "-", "*", "/", "(", ")")
        for kind, grp in zip(kinds, m.groups()):
            if grp is not None:
                toks.append((kind, grp))
                break
        pos = m.end()
    return toks


class _ScalarParser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            raise ScalarParseError(f"expected {kind!r}, got {self.peek()!r}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def parse(self) -> QScalar:
        val = self.expr()
        if self.i != len(self.toks):
            raise ScalarParseError(f"trailing input at token {self.i}")
        return val

    def expr(self):
        if self.peek() == "-":
            self.take("-")
            val = -self.term()
        else:
            val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take(self.peek())
            t = self.term()
            val = val + t if op == "+" else val - t
        return val

    def term(self):
        val = self.power()
        while True:
            k = self.peek()
            if k == "*":
                self.take("*")
                val = val * self.power()
            elif k == "/":
                self.take("/")
                d = self.power()
                if d.is_zero():
                    raise ScalarParseError("division by zero")
                val = val / d
            elif k in ("int", "q", "("):
                val = val * self.power()
            else:
                return val

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            neg = False
            if self.peek() == "-":
                self.take("-")
                neg = True
            k = int(self.take("int"))
            return base ** (-k if neg else k)
        return base

    def atom(self):
        k = self.peek()
        if k == "int":
            return QScalar(int(self.take("int")))
        if k == "q":
            self.take("q")
            return Q
        if k == "(":
            self.take("(")
            v = self.expr()
            self.take(")")
            return v
        raise ScalarParseError(f"unexpected token {k!r}")


def parse_scalar(text: str) -> QScalar:
    """Parse the scalar text grammar, e.g. ``"(q^2-1)/(q+q^-1)"``."""
    return _ScalarParser(text).parse()


QScalar.parse = staticmethod(parse_scalar)


# --------------------------------------------------------------------------
# truncated series
# --------------------------------------------------------------------------

DEFAULT_TRUNCATION = 20


@dataclass(frozen=True)
class TruncSeries:
    """``sum_{k=low}^{order} coeffs[k-low] * w^k + O(w^{order+1})``.

    ``w`` is ``z`` when ``at_infinity`` is False and ``1/z`` otherwise.
    """

    low: int
    coeffs: tuple
    at_infinity: bool = False

    @property
    def order(self) -> int:
        return self.low + len(self.coeffs) - 1

    @classmethod
    def from_list(cls, coeffs, low=0, at_infinity=False):
        return cls(low, tuple(_coerce(c) for c in coeffs), at_infinity)

    @classmethod
    def constant(cls, c, order=DEFAULT_TRUNCATION, at_infinity=False):
        return cls(0, (_coerce(c),) + (ZERO,) * order, at_infinity)

    def coeff(self, k: int) -> QScalar:
        if k > self.order:
            raise IndexError(f"coefficient {k} is beyond truncation order {self.order}")
        if k < self.low:
            return ZERO
        return self.coeffs[k - self.low]

    def truncate(self, order: int) -> "TruncSeries":
        order = min(order, self.order)
        return TruncSeries(self.low, self.coeffs[: order - self.low + 1], self.at_infinity)

    def _check(self, other):
        if self.at_infinity != other.at_infinity:
            raise ValueError("cannot combine expansions about 0 and about infinity")

    def __add__(self, other):
        self._check(other)
        lo = min(self.low, other.low)
        hi = min(self.order, other.order)
        return TruncSeries(lo, tuple(self.coeff(k) + other.coeff(k) for k in range(lo, hi + 1)), self.at_infinity)

    def __neg__(self):
        return TruncSeries(self.low, tuple(-c for c in self.coeffs), self.at_infinity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        c = _coerce(c)
        return TruncSeries(self.low, tuple(c * x for x in self.coeffs), self.at_infinity)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        lo = self.low + other.low
        hi = min(self.order + other.low, other.order + self.low)
        out = []
        for k in range(lo, hi + 1):
            acc = ZERO
            for i in range(self.low, k - other.low + 1):
                a = self.coeffs[i - self.low]
                if a:
                    b = other.coeffs[k - i - other.low]
                    if b:
                        acc = acc + a * b
            out.append(acc)
        return TruncSeries(lo, tuple(out), self.at_infinity)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.at_infinity != other.at_infinity:
            return False
        lo = min(self.low, other.low)
        hi = min(self.order, other.order)
        return all(self.coeff(k) == other.coeff(k) for k in range(lo, hi + 1))

    def __hash__(self):
        return hash((self.low, self.coeffs, self.at_infinity))

    def _power_series(self):
        if self.low < 0 and any(self.coeffs[: -self.low]):
            raise ValueError("series has negative-exponent terms")
        return [self.coeff(k) for k in range(0, self.order + 1)]

    def __str__(self):
        var = "z^-1" if self.at_infinity else "z"
        parts = [f"({c})*{var}^{k}" for k, c in zip(range(self.low, self.order + 1), self.coeffs) if c]
        return " + ".join(parts + [f"O({var}^{self.order + 1})"])


def series_exp(s: TruncSeries) -> TruncSeries:
    """exp of a power series with zero constant term."""
    a = s._power_series()
    if a[0]:
        raise ValueError("series_exp needs a zero constant term")
    T = len(a) - 1
    e = [ONE] + [ZERO] * T
    for n in range(1, T + 1):
        acc = ZERO
        for k in range(1, n + 1):
            if a[k] and e[n - k]:
                acc = acc + _int_scalar(k) * a[k] * e[n - k]
        e[n] = acc * QScalar(Fraction(1, n))
    return TruncSeries(0, tuple(e), s.at_infinity)


def series_log(s: TruncSeries) -> TruncSeries:
    """log of a power series with constant term 1."""
    a = s._power_series()
    if a[0] != ONE:
        raise ValueError("series_log needs constant term 1")
    T = len(a) - 1
    lg = [ZERO] * (T + 1)
    for n in range(1, T + 1):
        acc = _int_scalar(n) * a[n]
        for k in range(1, n):
            if lg[k] and a[n - k]:
                acc = acc - _int_scalar(k) * lg[k] * a[n - k]
        lg[n] = acc * QScalar(Fraction(1, n))
    return TruncSeries(0, tuple(lg), s.at_infinity)
