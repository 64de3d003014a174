"""Named identity instances: defining relations, derived relations, lemmas, chains.

Every instance is ``(name, lhs, rhs)`` in the free algebra; names are stable
and encode the family and the parameters, e.g. ``A.ii+1+[i=2,m=1,n=0,k=2]``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .algebra import CH, D, H, K, XM, XP, Element, Generator, LoopAlgebra
from .rewrite import DEFAULT_BUDGET, RewriteSystem, Verdict
from .rootdata import RootDatum, odd_segment_set
from .scalars import ONE, QScalar, q_integer_base

__all__ = [
    "Instance", "SUITES", "definition_relations", "appendix_a", "lemma_a2", "lemma_42",
    "appendix_bc_chains", "qbracket_free", "relation_suite", "build_suite", "run_suite",
    "verify_appendix_chains", "InstanceResult", "seconds_text",
]


@dataclass(frozen=True)
class Instance:
    name: str
    lhs: Element
    rhs: Element
    family: str
    free: bool = False  # holds in the free algebra, no relations needed


def _name(family: str, **params) -> str:
    inner = ",".join(f"{k}={v}" for k, v in params.items())
    return f"{family}[{inner}]" if inner else family


def _q(k: int) -> QScalar:
    return QScalar.qpow(k)


def _w(*gens) -> Element:
    return Element.word(*gens)


def _window(w: int):
    return range(-w, w + 1)


def _signs():
    return ((1, "+", XP), (-1, "-", XM))


# ----------------------------------------------------------------------
# defining relations
# ----------------------------------------------------------------------

def definition_relations(rd: RootDatum, window: int) -> list:
    alg = LoopAlgebra(rd)
    I = list(rd.index_set)
    W = list(_window(window))
    Ws = [s for s in W if s]
    out = []
    one = Element(ONE)
    C2, C2i = _w(Generator(CH, 0, 1)), _w(Generator(CH, 0, -1))
    Dp, Dm = _w(Generator(D, 0, 1)), _w(Generator(D, 0, -1))

    def Kw(i, e=1):
        return _w(Generator(K, i, e))

    def add(family, lhs, rhs, **p):
        out.append(Instance(_name("rel." + family, **p), lhs, rhs, "definition"))

    # central half-powers of C and the inverse pairs
    add("C-inv", C2 * C2i, one)
    add("C-inv", C2i * C2, one, order="rev")
    gens = [Generator(K, i, e) for i in I for e in (1, -1)]
    gens += [Generator(D, 0, 1), Generator(D, 0, -1)]
    gens += [Generator(H, i, s) for i in I for s in Ws]
    gens += [Generator(k, i, n) for k in (XP, XM) for i in I for n in W]
    for g in gens:
        add("C-central", C2 * _w(g), _w(g) * C2, g=_gen_label(g))
    for i in I:
        add("K-inv", Kw(i) * Kw(i, -1), one, i=i)
        add("K-inv", Kw(i, -1) * Kw(i), one, i=i, order="rev")
    for i in I:
        for j in I:
            if i < j:
                add("KK", Kw(i) * Kw(j), Kw(j) * Kw(i), i=i, j=j)
            for s in Ws:
                h = _w(Generator(H, j, s))
                add("Kh", Kw(i) * h, h * Kw(i), i=i, j=j, s=s)
        add("KD", Kw(i) * Dp, Dp * Kw(i), i=i)
    add("DD", Dp * Dm, one)
    add("DD", Dm * Dp, one, order="rev")
    for i in I:
        for s in Ws:
            h = _w(Generator(H, i, s))
            add("Dh", Dp * h * Dm, h.scale(_q(s)), i=i, s=s)
    for sg, tag, kind in _signs():
        for j in I:
            for n in W:
                x = _w(Generator(kind, j, n))
                add("DX" + tag, Dp * x * Dm, x.scale(_q(n)), j=j, n=n)
    for sg, tag, kind in _signs():
        for i in I:
            for j in I:
                for n in W:
                    x = _w(Generator(kind, j, n))
                    add("KX" + tag, Kw(i) * x * Kw(i, -1), x.scale(_q(sg * rd.a(i, j))), i=i, j=j, n=n)
    # Heisenberg part
    for i in I:
        qi = rd.q_i(i)
        li = rd.q_exp(i)
        for j in I:
            for m in Ws:
                for n in Ws:
                    lhs = alg.qbracket(_w(Generator(H, i, m)), _w(Generator(H, j, n)))
                    rhs = Element()
                    if m + n == 0:
                        c = q_integer_base(m * li * rd.a(i, j), qi) / ((qi - qi.inverse()) * m)
                        rhs = (alg.central_power(2 * m) - alg.central_power(-2 * m)).scale(c)
                    add("hh", lhs, rhs, i=i, j=j, m=m, n=n)
    for sg, tag, kind in _signs():
        for i in I:
            qi = rd.q_i(i)
            li = rd.q_exp(i)
            for j in I:
                for s in Ws:
                    for n in W:
                        lhs = alg.qbracket(_w(Generator(H, i, s)), _w(Generator(kind, j, n)))
                        c = q_integer_base(s * li * rd.a(i, j), qi) / s * sg
                        rhs = (alg.central_power(-sg * abs(s)) * _w(Generator(kind, j, n + s))).scale(c)
                        add("hX" + tag, lhs, rhs, i=i, j=j, s=s, n=n)
    for i in I:
        qi = rd.q_i(i)
        for j in I:
            for m in W:
                for n in W:
                    lhs = alg.qbracket(_w(Generator(XP, i, m)), _w(Generator(XM, j, n)))
                    rhs = Element()
                    if i == j:
                        r = m + n
                        rhs = (alg.central_power(m - n) * alg.phi(i, 1, r)
                               - alg.central_power(n - m) * alg.phi(i, -1, r))
                        rhs = rhs.scale(ONE / (qi - qi.inverse()))
                    add("X+X-", lhs, rhs, i=i, j=j, m=m, n=n)
    # X-X relations
    for sg, tag, kind in _signs():
        def X(i, n, kind=kind):
            return _w(Generator(kind, i, n))

        for i in I:
            for j in I:
                a = rd.a(i, j)
                for m in W:
                    for n in W:
                        if a == 0:
                            if i > j or (i == j and m > n):
                                continue
                            add("XX0" + tag, alg.qbracket(X(i, m), X(j, n)), Element(), i=i, j=j, m=m, n=n)
                        else:
                            u = _q(sg * a)
                            lhs = alg.qbracket(X(i, m + 1), X(j, n), u) + alg.qbracket(X(j, n + 1), X(i, m), u)
                            add("XXq" + tag, lhs, Element(), i=i, j=j, m=m, n=n)
        for i in I:
            if i == rd.M:
                continue
            for j in I:
                if abs(rd.a(i, j)) != 1:
                    continue
                for m in W:
                    for n in W:
                        if n < m:
                            continue
                        for k in W:
                            s = _serre(alg, X, i, j, m, n, k)
                            if m != n:
                                s = s + _serre(alg, X, i, j, n, m, k)
                            add("serre" + tag, s, Element(), i=i, j=j, m=m, n=n, k=k)
        if rd.M > 1 and rd.N > 1:
            M = rd.M
            for m in W:
                for n in W:
                    for k in W:
                        for u in W:
                            if u < n:
                                continue
                            s = _super_serre(alg, X, M, m, n, k, u)
                            if n != u:
                                s = s + _super_serre(alg, X, M, m, u, k, n)
                            add("sserre" + tag, s, Element(), m=m, n=n, k=k, u=u)
    return out


def _gen_label(g: Generator) -> str:
    from .expr import format_generator
    return format_generator(g).replace(",", ";")


def _serre(alg, X, i, j, m, n, k):
    q = _q(1)
    return alg.qbracket(X(i, m), alg.qbracket(X(i, n), X(j, k), q.inverse()), q)


def _super_serre(alg, X, M, m, n, k, u):
    q = _q(1)
    inner = alg.qbracket(alg.qbracket(X(M - 1, m), X(M, n), q.inverse()), X(M + 1, k), q)
    return alg.qbracket(inner, X(M, u))


# ----------------------------------------------------------------------
# derived relations
# ----------------------------------------------------------------------

def appendix_a(rd: RootDatum, window: int) -> list:
    alg = LoopAlgebra(rd)
    I = list(rd.index_set)
    W = list(_window(window))
    ks = range(0, window + 1)
    M = rd.M
    q, qi_ = _q(1), _q(-1)
    out = []

    def X(i, n):
        return _w(Generator(XP, i, n))

    def add(family, lhs, rhs, **p):
        out.append(Instance(_name("A." + family, **p), lhs, rhs, "appendix-a"))

    br = alg.qbracket
    for i in I:
        for j in I:
            if abs(rd.a(i, j)) != 1:
                continue
            for m in W:
                for k in W:
                    if i != M:
                        add("ii", br(X(i, m), br(X(i, m), X(j, k), qi_), q), Element(), i=i, j=j, m=m, k=k, form=1)
                        add("ii", br(X(i, m), br(X(i, m), X(j, k), q), qi_), Element(), i=i, j=j, m=m, k=k, form=2)
                    else:
                        add("MM", br(X(M, m), br(X(M, m), X(j, k), qi_), qi_), Element(), j=j, m=m, k=k, form=1)
                        add("MM", br(X(M, m), br(X(M, m), X(j, k), q), q), Element(), j=j, m=m, k=k, form=2)
    for i in I:
        if i - 1 not in I:
            continue
        for m in W:
            for n in W:
                for k in ks:
                    lhs, rhs = _ii1_plus(alg, rd, i, m, n, k)
                    add("ii+1+", lhs, rhs, i=i, m=m, n=n, k=k)
                    lhs, rhs = _ii1_minus(alg, rd, i, m, n, k)
                    add("ii+1-", lhs, rhs, i=i, m=m, n=n, k=k)
    if M + 1 in I:
        for m in W:
            for n in W:
                for k in ks:
                    lhs = br(X(M, m), X(M + 1, n), q)
                    rhs = br(X(M, m + k), X(M + 1, n - k), q).scale(_q(k))
                    for s in range(k):
                        rhs = rhs + (X(M, m + s) * X(M + 1, n - s)).scale(_q(s) * (1 - _q(2)))
                    add("MM+1b", lhs, rhs, m=m, n=n, k=k)
    for i in I:
        if i < M or i + 1 not in I:
            continue
        for m in W:
            for n in W:
                for k in ks:
                    lhs, rhs = _gtM_plus(alg, i, m, n, k)
                    add(">M+", lhs, rhs, i=i, m=m, n=n, k=k)
                    lhs, rhs = _gtM_minus(alg, i, m, n, k)
                    add(">M-", lhs, rhs, i=i, m=m, n=n, k=k)
    # combined forms with a signed shift
    for i in I:
        if i - 1 not in I:
            continue
        for m in W:
            for n in W:
                for k in W:
                    f = _ii1_plus if k >= 0 else _ii1_minus
                    lhs, rhs = f(alg, rd, i, m, n, abs(k))
                    add("ii+1", lhs, rhs, i=i, m=m, n=n, k=k)
    for i in I:
        if i < M or i + 1 not in I:
            continue
        for m in W:
            for n in W:
                for k in W:
                    f = _gtM_plus if k >= 0 else _gtM_minus
                    lhs, rhs = f(alg, i, m, n, abs(k))
                    add(">M", lhs, rhs, i=i, m=m, n=n, k=k)
    return out


def _ii1_plus(alg, rd, i, m, n, k):
    qi = rd.q_i(i)
    X = lambda a, b: _w(Generator(XP, a, b))  # noqa: E731
    lhs = alg.qbracket(X(i - 1, m), X(i, n), qi)
    rhs = alg.qbracket(X(i - 1, m + k), X(i, n - k), qi).scale(qi ** k)
    for s in range(1, k + 1):
        rhs = rhs + (X(i, n - s) * X(i - 1, m + s)).scale(qi ** (s - 1) * (qi * qi - 1))
    return lhs, rhs


def _ii1_minus(alg, rd, i, m, n, k):
    qi = rd.q_i(i)
    X = lambda a, b: _w(Generator(XP, a, b))  # noqa: E731
    lhs = alg.qbracket(X(i - 1, m), X(i, n), qi)
    rhs = alg.qbracket(X(i - 1, m - k), X(i, n + k), qi).scale(qi ** (-k))
    for s in range(k):
        rhs = rhs - (X(i, n + s) * X(i - 1, m - s)).scale(qi ** (-s - 1) * (qi * qi - 1))
    return lhs, rhs


def _gtM_plus(alg, i, m, n, k):
    q = _q(1)
    X = lambda a, b: _w(Generator(XP, a, b))  # noqa: E731
    lhs = alg.qbracket(X(i + 1, m), X(i, n), q)
    rhs = alg.qbracket(X(i + 1, m - k), X(i, n + k), q).scale(_q(k))
    for s in range(1, k + 1):
        rhs = rhs + (X(i, n + s) * X(i + 1, m - s)).scale(_q(s - 1) * (_q(2) - 1))
    return lhs, rhs


def _gtM_minus(alg, i, m, n, k):
    q = _q(1)
    X = lambda a, b: _w(Generator(XP, a, b))  # noqa: E731
    lhs = alg.qbracket(X(i + 1, m), X(i, n), q)
    rhs = alg.qbracket(X(i + 1, m + k), X(i, n - k), q).scale(_q(-k))
    for s in range(k):
        rhs = rhs - (X(i, n - s) * X(i + 1, m + s)).scale(_q(-s - 1) * (_q(2) - 1))
    return lhs, rhs


def lemma_a2(rd: RootDatum, window: int, include_odd_middle: bool = True) -> list:
    """Four vanishing brackets with composite root vectors.

    Part (2) covers every middle node, including ``i = M``; pass
    ``include_odd_middle=False`` to restrict it to ``i != M``.
    """
    alg = LoopAlgebra(rd)
    I = list(rd.index_set)
    W = list(_window(window))
    M = rd.M
    out = []

    def X(i, n):
        return _w(Generator(XP, i, n))

    def add(part, lhs, **p):
        out.append(Instance(_name(f"chain-lemma.part{part}", **p), lhs, Element(), "lemma-A2"))

    br = alg.qbracket
    for i in I:
        if i == M or i - 1 not in I or i + 1 not in I:
            continue
        for m in W:
            for n in W:
                for k in W:
                    inner = br(br(X(i - 1, m), X(i, n), rd.q_i(i)), X(i + 1, k), rd.q_i(i + 1))
                    add(1, br(inner, X(i, n)), i=i, m=m, n=n, k=k)
    for a in I:
        for b in I:
            for i in range(a + 1, b):
                if i == M and not include_odd_middle:
                    continue
                for n in W:
                    add(2, br(X(i, 0), alg.composite_root_vector(a, b, n)), i=i, a=a, b=b, n=n)
    for a in range(1, M):
        for n in W:
            add(3, br(X(M, 0), alg.composite_root_vector(a, M, n), _q(-1)), a=a, n=n)
    for b in I:
        if b == M:
            continue
        for a in range(1, b):
            for n in W:
                add(4, br(X(b, 0), alg.composite_root_vector(a, b, n), rd.q_i(b)), a=a, b=b, n=n)
    return out


def lemma_42(rd: RootDatum, window: int, a_max: int = 3) -> list:
    """Anticommutation of the odd root vectors ``X^{+-}_{1,a}`` when M = 1."""
    if rd.M != 1:
        return []
    alg = LoopAlgebra(rd)
    W = list(_window(window))
    out = []
    for sg, tag, _ in _signs():
        for a in range(1, min(a_max, rd.rank) + 1):
            for m in W:
                for n in W:
                    if n < m:
                        continue
                    xm = alg.composite_root_vector(1, a, m, sign=sg)
                    xn = alg.composite_root_vector(1, a, n, sign=sg)
                    out.append(Instance(_name("anticommute" + tag, a=a, m=m, n=n),
                                        xm * xn + xn * xm, Element(), "lemma-4.2"))
    return out


def appendix_bc_chains(rd: RootDatum, window: int) -> list:
    """Relation-level steps of the highest-weight lemmas' proofs (no module vector)."""
    alg = LoopAlgebra(rd)
    I = list(rd.index_set)
    W = list(_window(window))
    M = rd.M
    q, qi_ = _q(1), _q(-1)
    br = alg.qbracket
    out = []

    def X(i, n):
        return _w(Generator(XP, i, n))

    def R(a, b, n):
        return alg.composite_root_vector(a, b, n)

    def add(family, lhs, rhs, free=False, **p):
        out.append(Instance(_name(family, **p), lhs, rhs, "appendix-bc-chains", free))

    if window == 0:
        return out
    ps = list(_window(window))
    for a, b in odd_segment_set(rd):
        for p in ps:
            add("chain", br(R(a, b, p), R(a, b, p + 1)), Element(), a=a, b=b, p=p)
            if a < M:
                split = br(br(X(a, p), R(a + 1, b, 0), q), br(X(a, p + 1), R(a + 1, b, 0), q))
                add("chain-split", br(R(a, b, p), R(a, b, p + 1)), split, a=a, b=b, p=p)
                add("bracket-flip", br(X(a, p), X(a + 1, 0), q), br(X(a + 1, 0), X(a, p), qi_).scale(-q),
                    free=True, a=a, p=p)
                add("bracket-shift", br(X(a + 1, 0), X(a, p), qi_), -br(X(a, p + 1), X(a + 1, -1), qi_), a=a, p=p)
    # regrouping of composite vectors at every cut point
    for a in I:
        for b in I:
            for c in range(a, b):
                for n in W:
                    rhs = br(R(a, c, n), R(c + 1, b, 0), rd.q_i(c + 1))
                    add("root-split", R(a, b, n), rhs, a=a, b=b, c=c, n=n)
    # the bracket of X_{M+2} with X_{M-1,M+1} passes through X_{M-1,M}
    if M >= 2 and M + 2 in I:
        for m in W:
            for n in W:
                lhs = br(X(M + 2, m), br(R(M - 1, M, n), X(M + 1, 0), qi_), q)
                rhs = br(R(M - 1, M, n), br(X(M + 2, m), X(M + 1, 0), q), qi_)
                add("root-commute", lhs, rhs, m=m, n=n)
    # first q-bracket identity applied to composite vectors
    for a in I:
        for b in I:
            if b <= a:
                continue
            for m in W:
                for n in W:
                    x = X(a, m)
                    y, z = R(a, b - 1, n), X(b, 0)
                    u = rd.q_i(b)
                    v = q
                    lhs = br(x, br(y, z, u), v)
                    rhs = br(br(x, y, q), z, u * v / q)
                    sign = -1 if (alg.parity(x) & alg.parity(y)) else 1
                    rhs = rhs + br(y, br(x, z, v / q), u / q).scale(q * sign)
                    add("root-expand", lhs, rhs, free=True, a=a, b=b, m=m, n=n)
    return out


# ----------------------------------------------------------------------
# free-algebra identities
# ----------------------------------------------------------------------

def _random_homogeneous(rng: random.Random, rd: RootDatum) -> Element:
    """Random word of length 1..3 times a random Laurent monomial coefficient.

    A single word is automatically homogeneous; occasionally two words of the
    same parity are added to exercise linearity.
    """
    I = list(rd.index_set)

    def word():
        L = rng.randint(1, 3)
        gens = []
        for _ in range(L):
            kind = rng.choice((XP, XM, H, K))
            i = rng.choice(I)
            if kind == H:
                gens.append(Generator(H, i, rng.choice((-2, -1, 1, 2))))
            elif kind == K:
                gens.append(Generator(K, i, rng.choice((1, -1))))
            else:
                gens.append(Generator(kind, i, rng.randint(-2, 2)))
        return tuple(gens)

    w = word()
    e = Element({w: QScalar.qpow(rng.randint(-2, 2), rng.choice((1, 2, -1, 3)))})
    if rng.randrange(10) < 3:
        from .algebra import word_parity
        for _ in range(10):
            w2 = word()
            if word_parity(rd, w2) == word_parity(rd, w):
                e = e + Element({w2: QScalar.qpow(rng.randint(-2, 2), rng.choice((1, -2)))})
                break
    return e


def qbracket_free(rd: RootDatum, count: int = 200, seed: int = 0) -> list:
    """The four q-bracket expansion identities on random homogeneous triples."""
    alg = LoopAlgebra(rd)
    rng = random.Random(seed)
    br = alg.qbracket
    out = []
    for t in range(count):
        a, b, c = (_random_homogeneous(rng, rd) for _ in range(3))
        u, v, x = (_q(rng.randint(-3, 3)) for _ in range(3))
        pa, pb, pc = alg.parity(a), alg.parity(b), alg.parity(c)
        sab = -1 if pa & pb else 1
        sbc = -1 if pb & pc else 1
        ids = (
            (br(a, b * c, v), br(a, b, x) * c + (b * br(a, c, v / x)).scale(x * sab)),
            (br(a * b, c, v), a * br(b, c, x) + (br(a, c, v / x) * b).scale(x * sbc)),
            (br(a, br(b, c, u), v), br(br(a, b, x), c, u * v / x) + br(b, br(a, c, v / x), u / x).scale(x * sab)),
            (br(br(a, b, u), c, v), br(a, br(b, c, x), u * v / x) + br(br(a, c, v / x), b, u / x).scale(x * sbc)),
        )
        for k, (lhs, rhs) in enumerate(ids, 1):
            out.append(Instance(_name("qbracket", id=k, t=t), lhs, rhs, "qbracket-free", True))
    return out


# ----------------------------------------------------------------------
# drivers
# ----------------------------------------------------------------------

def relation_suite(rd: RootDatum, window: int) -> list:
    """All defining relations, derived relations and the four-part chain identities over the window."""
    return definition_relations(rd, window) + appendix_a(rd, window) + lemma_a2(rd, window)


SUITES = {
    "definition": definition_relations,
    "appendix-a": appendix_a,
    "lemma-A2": lemma_a2,
    "lemma-4.2": lemma_42,
    "appendix-bc-chains": appendix_bc_chains,
    "qbracket-free": lambda rd, window: qbracket_free(rd),
}


def build_suite(name: str, rd: RootDatum, window: int) -> list:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(rd, window)


@dataclass(frozen=True)
class InstanceResult:
    name: str
    verdict: Verdict
    elapsed_ns: int = 0

    @property
    def proved(self) -> bool:
        return self.verdict.proved

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name}
        out.update(self.verdict.to_json())
        if timing:
            out["elapsed"] = seconds_text(self.elapsed_ns)
        return out


def seconds_text(ns: int) -> str:
    """Integer nanoseconds as decimal seconds text, without going through floats."""
    return f"{ns // 10**9}.{ns % 10**9 // 1000:06d}"


def _free_verdict(inst: Instance) -> Verdict:
    diff = inst.lhs - inst.rhs
    if not diff:
        return Verdict("Proved", 0, "free-expansion")
    return Verdict("Inconclusive", 0, "free-expansion", f"{len(diff)} terms survive")


_WORKER_RS: dict = {}


def _check_one(args):
    import time

    rd_key, budget, max_margin, inst = args
    if inst.free:
        t0 = time.perf_counter_ns()
        v = _free_verdict(inst)
        return InstanceResult(inst.name, v, time.perf_counter_ns() - t0)
    rs = _WORKER_RS.get((rd_key, budget))
    if rs is None:
        rs = RewriteSystem(RootDatum(*rd_key), budget=budget)
        _WORKER_RS[(rd_key, budget)] = rs
    t0 = time.perf_counter_ns()
    v = rs.verify_identity(inst.lhs, inst.rhs, max_margin=max_margin)
    return InstanceResult(inst.name, v, time.perf_counter_ns() - t0)


def run_suite(instances: list, rd: RootDatum, budget: int = DEFAULT_BUDGET, jobs: int = 1,
              max_margin: int = 1) -> list:
    """Verify every instance; results come back in input order whatever ``jobs`` is."""
    key = (rd.M, rd.N)
    tasks = [(key, budget, max_margin, inst) for inst in instances]
    if jobs <= 1 or len(tasks) < 2:
        return [_check_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_check_one, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))


def verify_appendix_chains(rd: RootDatum, window: int, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list:
    return run_suite(appendix_bc_chains(rd, window), rd, budget=budget, jobs=jobs)


def iter_families(instances) -> dict:
    out: dict = {}
    for inst in instances:
        out.setdefault(inst.name.split("[")[0], []).append(inst)
    return out

