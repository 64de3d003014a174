"""Directed rewriting modulo the defining relations.

All rules have a two-letter left-hand side, so a word is in normal form when
no adjacent pair is reducible.  Normal forms are computed by inserting letters
one at a time, from the right, into an already normal word; both the word
normal form and each insertion are memoized.

Termination: cross-class rules move letters into the block order
X^- < h < K < C^{1/2} < D < X^+.  Inside an X block, every rule either
removes an inversion of the node sequence, or lowers ``sum_i 2^i |n_i|``, or
keeps that and lowers ``sum n_i^2``, or removes an index inversion among
equal nodes.

Serre-type relations are not rules; :mod:`qasa.certificate` handles them.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .algebra import CH, D, H, K, XM, XP, Element, Generator, LoopAlgebra, as_element
from .rootdata import RootDatum
from .scalars import ONE, QScalar, q_integer, q_integer_base

__all__ = ["RewriteSystem", "BudgetExceeded", "Verdict", "DEFAULT_BUDGET", "normal_form", "verify_identity"]

DEFAULT_BUDGET = 100_000


class BudgetExceeded(RuntimeError):
    """Raised when a reduction needs more rule applications than allowed."""

    def __init__(self, steps, partial=None):
        super().__init__(f"rewrite budget exhausted after {steps} rule applications")
        self.steps = steps
        self.partial = partial


@dataclass(frozen=True)
class Verdict:
    status: str  # "Proved" or "Inconclusive"
    steps: int
    method: str = "rewrite"
    detail: str = ""

    @property
    def proved(self) -> bool:
        return self.status == "Proved"

    def to_json(self) -> dict:
        out = {"verdict": self.status, "steps": self.steps, "method": self.method}
        if self.detail:
            out["detail"] = self.detail
        return out


def _acc(out: dict, w, c):
    v = out.get(w)
    if v is None:
        out[w] = c
    else:
        v = v + c
        if v:
            out[w] = v
        else:
            del out[w]


class RewriteSystem:
    """Oriented defining relations for a fixed root datum.

    ``rules`` lists the rule families with their relation tags; the actual
    instances are generated on demand by :meth:`reduce_pair`.
    """

    RULE_FAMILIES = (
        ("inv-cancel", "K_i K_i^-1 = 1, D D^-1 = 1, C^1/2 C^-1/2 = 1"),
        ("K-commute", "[K_i, K_j] = 0"),
        ("central", "C^{1/2} central"),
        ("K-h", "[K_i, h_j(s)] = 0, [K_i, D] = 0"),
        ("D-h", "D h_i(s) D^-1 = q^s h_i(s)"),
        ("D-X", "D X_i(s) D^-1 = q^s X_i(s)"),
        ("K-X", "K_i X^pm_j(n) K_i^-1 = q^{pm a_ij} X^pm_j(n)"),
        ("h-h", "[h_i(m), h_j(n)] central"),
        ("h-X", "[h_i(s), X^pm_j(n)]"),
        ("X+X-", "[X^+_i(m), X^-_j(n)]"),
        ("XX-orth", "[X_i(m), X_j(n)] = 0 for a_ij = 0"),
        ("XX-quad", "[X_i(m+1), X_j(n)]_u + [X_j(n+1), X_i(m)]_u = 0"),
    )

    def __init__(self, rd: RootDatum, budget: int = DEFAULT_BUDGET):
        self.rd = rd
        self.alg = LoopAlgebra(rd)
        self.budget = int(budget)
        self._pair_cache: dict = {}
        self._insert_cache: dict = {}
        self._word_cache: dict = {}
        self._relation_nf: dict = {}
        self._aux = None
        self._steps = 0
        self._limit = None
        M = rd.M
        self._A = {(i, j): rd.cartan_pairing(i, j) for i in rd.index_set for j in rd.index_set}
        self._qexp = {i: rd.q_exp(i) for i in rd.index_set}
        self._odd = M

    # ------------------------------------------------------------------
    # single rule application
    # ------------------------------------------------------------------

    def _h_coeff(self, i: int, j: int, s: int) -> QScalar:
        """``[s l_i a_ij]_{q_i} / s``."""
        rd = self.rd
        return q_integer_base(s * rd.sign(i) * self._A[i, j], rd.q_i(i)) / s

    def _hh_bracket(self, i, s, j, t):
        """``[h_i(s), h_j(t)]`` as a list of (word, coeff)."""
        if s + t != 0:
            return []
        a = self._A[i, j]
        if a == 0:
            return []
        q = QScalar.qpow(1)
        c = q_integer(s * a) / ((q - q.inverse()) * s)
        if not c:
            return []
        up = Generator(CH, 0, 1 if s > 0 else -1)
        dn = Generator(CH, 0, -1 if s > 0 else 1)
        k = 2 * abs(s)
        return [((up,) * k, c), ((dn,) * k, -c)]

    def reduce_pair(self, x: Generator, y: Generator):
        """Rewrite ``x y``; returns None if irreducible else a list of (word, coeff)."""
        key = (x, y)
        cache = self._pair_cache
        if key in cache:
            return cache[key]
        res = self._reduce_pair(x, y)
        cache[key] = res
        return res

    def _reduce_pair(self, x: Generator, y: Generator):
        kx, ky = x.kind, y.kind
        if kx == ky:
            return self._same_class(x, y)
        if kx < ky:
            return None
        # kx > ky: move y to the left of x
        swapped = ((y, x), ONE)
        if kx == XP:
            if ky == XM:
                return self._xplus_xminus(x, y)
            if ky == H:
                c = self._h_coeff(y.i, x.i, y.n)
                out = [((y, x), ONE)]
                if c:
                    half = Generator(CH, 0, -1)
                    out.append(((half,) * abs(y.n) + (Generator(XP, x.i, x.n + y.n),), -c))
                return out
            if ky == K:
                return [((y, x), QScalar.qpow(-y.n * self._A[y.i, x.i]))]
            if ky == CH:
                return [swapped]
            if ky == D:
                return [((y, x), QScalar.qpow(-y.n * x.n))]
        if ky == XM:
            if kx == H:
                c = self._h_coeff(x.i, y.i, x.n)
                out = [((y, x), ONE)]
                if c:
                    half = Generator(CH, 0, 1)
                    out.append(((Generator(XM, y.i, y.n + x.n),) + (half,) * abs(x.n), -c))
                return out
            if kx == K:
                return [((y, x), QScalar.qpow(-x.n * self._A[x.i, y.i]))]
            if kx == CH:
                return [swapped]
            if kx == D:
                return [((y, x), QScalar.qpow(x.n * y.n))]
        if kx == D and ky == H:
            return [((y, x), QScalar.qpow(x.n * y.n))]
        # remaining pairs among h, K, C^{1/2}, D commute
        return [swapped]

    def _same_class(self, x: Generator, y: Generator):
        k = x.kind
        if k in (XP, XM):
            return self._xx(x, y, 1 if k == XP else -1)
        if k == H:
            if (x.i, x.n) <= (y.i, y.n):
                return None
            return [((y, x), ONE)] + [(w, -c) for w, c in self._hh_bracket(y.i, y.n, x.i, x.n)]
        if k == K:
            if x.i == y.i:
                if x.n == -y.n:
                    return [((), ONE)]
                return None
            if x.i < y.i:
                return None
            return [((y, x), ONE)]
        # C^{1/2} and D: only cancellation
        if x.n == -y.n:
            return [((), ONE)]
        return None

    def _xplus_xminus(self, x: Generator, y: Generator):
        i, m = x.i, x.n
        j, n = y.i, y.n
        sign = -1 if (i == self._odd and j == self._odd) else 1
        out = [((y, x), QScalar(sign))]
        if i != j:
            return out
        alg = self.alg
        qi = self.rd.q_i(i)
        inv = ONE / (qi - qi.inverse())
        r = m + n
        for sgn, half in ((1, m - n), (-1, n - m)):
            ph = alg.phi(i, sgn, r)
            if not ph:
                continue
            cw = (Generator(CH, 0, 1 if half > 0 else -1),) * abs(half)
            for w, c in ph.terms.items():
                out.append((w + cw, c * inv * sgn))
        return out

    def _xx(self, x: Generator, y: Generator, sigma: int):
        i, a = x.i, x.n
        j, b = y.i, y.n
        kind = x.kind
        A = self._A[i, j]
        if i == j:
            if i == self._odd:
                if a > b:
                    return [((y, x), QScalar(-1))]
                if a == b:
                    return []
                return None
            u = QScalar.qpow(sigma * A)
            if a == b + 1:
                return [((y, x), u)]
            if a >= b + 2:
                g = Generator
                return [((y, x), u),
                        ((g(kind, i, b + 1), g(kind, i, a - 1)), QScalar(-1)),
                        ((g(kind, i, a - 1), g(kind, i, b + 1)), u)]
            return None
        if A == 0:
            if i > j:
                return [((y, x), ONE)]
            return None
        if i < j:
            return None
        # x = X_hi(c), y = X_lo(e) with hi = lo + 1
        c, e = a, b
        if c == 0:
            return None
        u = QScalar.qpow(sigma * A)
        g = Generator
        if c > 0:
            return [((y, x), u),
                    ((g(kind, j, e + 1), g(kind, i, c - 1)), QScalar(-1)),
                    ((g(kind, i, c - 1), g(kind, j, e + 1)), u)]
        ui = u.inverse()
        return [((y, x), ui),
                ((g(kind, i, c + 1), g(kind, j, e - 1)), ui),
                ((g(kind, j, e - 1), g(kind, i, c + 1)), QScalar(-1))]

    # ------------------------------------------------------------------
    # normal forms
    # ------------------------------------------------------------------

    def _tick(self):
        self._steps += 1
        if self._limit is not None and self._steps > self._limit:
            raise BudgetExceeded(self._steps)

    def _insert(self, x: Generator, w: tuple) -> dict:
        """Normal form of ``x * w`` for a normal word ``w``."""
        key = (x, w)
        cache = self._insert_cache
        hit = cache.get(key)
        if hit is not None:
            return hit
        if not w:
            res = {(x,): ONE}
        else:
            rep = self.reduce_pair(x, w[0])
            if rep is None:
                res = {(x,) + w: ONE}
            else:
                self._tick()
                rest = w[1:]
                res = {}
                for word, c in rep:
                    for w2, c2 in self._prepend(word, rest).items():
                        _acc(res, w2, c * c2)
        cache[key] = res
        return res

    def _prepend(self, word: tuple, rest: tuple) -> dict:
        """Normal form of ``word * rest`` with ``rest`` normal."""
        acc = {rest: ONE}
        for g in reversed(word):
            nxt: dict = {}
            for w, c in acc.items():
                for w2, c2 in self._insert(g, w).items():
                    _acc(nxt, w2, c * c2)
            acc = nxt
            if not acc:
                break
        return acc

    def word_normal_form(self, word: tuple) -> dict:
        hit = self._word_cache.get(word)
        if hit is not None:
            return hit
        if len(word) <= 1:
            res = {word: ONE}
        else:
            res = {}
            for w, c in self.word_normal_form(word[1:]).items():
                for w2, c2 in self._insert(word[0], w).items():
                    _acc(res, w2, c * c2)
        self._word_cache[word] = res
        return res

    def normal_form(self, e: Element, budget: int | None = None) -> Element:
        """Normal form under the oriented rules; raises BudgetExceeded."""
        out, _ = self.normal_form_counted(e, budget)
        return out

    def normal_form_counted(self, e: Element, budget: int | None = None):
        """Normal form and the number of fresh rule applications it took.

        A budget set by an enclosing call stays in force for nested calls.
        """
        outer = self._limit is not None
        start = self._steps
        if not outer:
            limit = self.budget if budget is None else int(budget)
            self._limit = start + limit
        old = sys.getrecursionlimit()
        if old < 20000:
            sys.setrecursionlimit(20000)
        try:
            out: dict = {}
            for w, c in e.terms.items():
                for w2, c2 in self.word_normal_form(w).items():
                    _acc(out, w2, c * c2)
        except BudgetExceeded:
            if outer:
                raise
            raise BudgetExceeded(self._steps - start, None) from None
        finally:
            if not outer:
                self._limit = None
        return Element._from_clean(out), self._steps - start

    def verify_identity(self, lhs, rhs, budget: int | None = None, max_margin: int = 1,
                        fresh: bool = True) -> Verdict:
        """Decide ``lhs == rhs`` in the algebra: Proved or Inconclusive.

        Proved means the difference reduces to zero, or its normal form is an
        exact linear combination of ideal elements (see :mod:`qasa.certificate`).
        With ``fresh`` the memo tables are cleared first, so the reported step
        count does not depend on earlier work.
        """
        from .certificate import prove_normal_form

        if fresh:
            self.clear_caches()
        diff = as_element(lhs) - as_element(rhs)
        limit = self.budget if budget is None else int(budget)
        start = self._steps
        self._limit = start + limit
        try:
            nf, _ = self.normal_form_counted(diff)
            if not nf:
                return Verdict("Proved", self._steps - start, "rewrite")
            res = prove_normal_form(self, nf, max_margin=max_margin)
            steps = self._steps - start
            if res.proved:
                return Verdict("Proved", steps, "certificate",
                               f"rows={res.rows_used}/{res.rows_built}, margin={res.margin}")
            return Verdict("Inconclusive", steps, "certificate", res.detail)
        except BudgetExceeded:
            return Verdict("Inconclusive", self._steps - start, "rewrite", "step budget exhausted")
        finally:
            self._limit = None

    def relation_normal_form(self, key, e: Element) -> Element:
        """Normal form of a fixed relation element, memoized under ``key``.

        These depend only on the relations, so they are computed once on a
        private copy whose rule applications are not charged to any identity.
        """
        hit = self._relation_nf.get(key)
        if hit is None:
            if self._aux is None:
                self._aux = RewriteSystem(self.rd, budget=10**12)
            hit = self._relation_nf[key] = self._aux.normal_form(e)
        return hit

    def is_normal_word(self, word: tuple) -> bool:
        return all(self.reduce_pair(word[k], word[k + 1]) is None for k in range(len(word) - 1))

    def clear_caches(self):
        self._pair_cache.clear()
        self._insert_cache.clear()
        self._word_cache.clear()


def normal_form(e: Element, rs: RewriteSystem) -> Element:
    return rs.normal_form(e)


def verify_identity(lhs, rhs, rs: RewriteSystem, **kw) -> Verdict:
    return rs.verify_identity(lhs, rhs, **kw)
