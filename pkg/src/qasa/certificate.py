"""Ideal-membership certificates inside one graded component.

The oriented two-letter rules are not confluent, and the Serre-type relations
are not rules at all.  When a normal form does not vanish, we search for an
explicit linear combination

    target = sum_r c_r * NF(u_r * A_r * w_r)

where each ``A_r`` is either the difference of the two one-step reductions of
an overlapping three-letter word, or a Serre-type relation, and ``u_r, w_r``
are normal words.  Every such row lies in the relation ideal, so an exact
solution proves the target is zero in the algebra.

The search runs over a finite window of loop indices.  Candidate rows are
chosen by elimination over GF(p) at a random point q = x; the final
combination is then recomputed and checked exactly over Q(q).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

from .algebra import XM, XP, Element, Generator
from .linalg import PRIME
from .rewrite import RewriteSystem, _acc
from .scalars import ONE, ZERO, QScalar

__all__ = ["CertificateResult", "prove_normal_form", "prove_zero", "relation_generators"]


@dataclass
class CertificateResult:
    proved: bool
    rows_built: int
    rows_used: int
    margin: int
    detail: str = ""


def _letters_key(word):
    return (Counter(g.i for g in word), sum(g.n for g in word))


def _component_key(kind, word):
    return (kind, tuple(sorted(Counter(g.i for g in word).items())), sum(g.n for g in word))


def serre_instances(rs: RewriteSystem, kind: int, nodes: Counter, lo: int, hi: int, degree=None):
    """Serre-type relations (cubic and, when M,N > 1, quartic) over the index window.

    Yields ``(tag, element)`` in the free algebra.  With ``degree`` given, only
    instances that can be padded by letters of the remaining nodes to that total
    loop degree are built.
    """
    total = sum(nodes.values())

    def fits(used: int, d: int) -> bool:
        if degree is None:
            return True
        L = total - used
        return L * lo <= degree - d <= L * hi

    rd = rs.rd
    alg = rs.alg
    q = QScalar.qpow(1)
    qi = q.inverse()
    M = rd.M
    rng = range(lo, hi + 1)

    def X(i, n):
        return Element.word(Generator(kind, i, n))

    for i in rd.index_set:
        if i == M or nodes[i] < 2:
            continue
        for j in rd.index_set:
            if abs(rd.a(i, j)) != 1 or nodes[j] < 1:
                continue
            for m in rng:
                for n in rng:
                    if n < m:
                        continue
                    for k in rng:
                        if not fits(3, m + n + k):
                            continue
                        s = alg.qbracket(X(i, m), alg.qbracket(X(i, n), X(j, k), qi), q)
                        if m != n:
                            s = s + alg.qbracket(X(i, n), alg.qbracket(X(i, m), X(j, k), qi), q)
                        yield (("serre", i, j, m, n, k), s)
    if M > 1 and rd.N > 1 and nodes[M] >= 2 and nodes[M - 1] >= 1 and nodes[M + 1] >= 1:
        for m in rng:
            for k in rng:
                for n in rng:
                    for u in rng:
                        if u < n or not fits(4, m + n + k + u):
                            continue
                        s = _super_serre(alg, X, M, m, n, k, u)
                        if n != u:
                            s = s + _super_serre(alg, X, M, m, u, k, n)
                        yield (("sserre", m, n, k, u), s)


def _super_serre(alg, X, M, m, n, k, u):
    q = QScalar.qpow(1)
    inner = alg.qbracket(X(M - 1, m), X(M, n), q.inverse())
    inner = alg.qbracket(inner, X(M + 1, k), q)
    return alg.qbracket(inner, X(M, u))


def overlap_instances(rs: RewriteSystem, kind: int, nodes: Counter, lo: int, hi: int):
    """Differences of the two one-step reductions of overlapping three-letter words."""
    letters = [Generator(kind, i, n) for i in sorted(nodes) for n in range(lo, hi + 1)]
    for x in letters:
        for y in letters:
            rxy = rs.reduce_pair(x, y)
            if rxy is None:
                continue
            for z in letters:
                if Counter((x.i, y.i, z.i)) - nodes:
                    continue
                ryz = rs.reduce_pair(y, z)
                if ryz is None:
                    continue
                left: dict = {}
                for w, c in rxy:
                    _acc(left, w + (z,), c)
                right: dict = {}
                for w, c in ryz:
                    _acc(right, (x,) + w, c)
                diff = Element(left) - Element(right)
                if diff:
                    yield (("overlap", x, y, z), diff)


def relation_generators(rs: RewriteSystem, kind: int, nodes: Counter, lo: int, hi: int,
                        sources=("overlap", "serre"), degree=None):
    if "serre" in sources:
        yield from serre_instances(rs, kind, nodes, lo, hi, degree)
    if "overlap" in sources:
        yield from overlap_instances(rs, kind, nodes, lo, hi)


def _words_on(rs, kind, nodes: Counter, lo: int, hi: int, degree: int):
    """All words whose node multiset is ``nodes`` with indices in [lo, hi] and given degree."""
    seq = sorted(nodes.elements())
    L = len(seq)
    if L == 0:
        if degree == 0:
            yield ()
        return
    perms = sorted(set(itertools.permutations(seq)))
    span = hi - lo
    for perm in perms:
        for idx in _index_tuples(L, lo, hi, degree):
            yield tuple(Generator(kind, i, n) for i, n in zip(perm, idx))


def _index_tuples(L, lo, hi, total):
    if L == 0:
        if total == 0:
            yield ()
        return
    if L == 1:
        if lo <= total <= hi:
            yield (total,)
        return
    for n in range(lo, hi + 1):
        rest = total - n
        if (L - 1) * lo <= rest <= (L - 1) * hi:
            for t in _index_tuples(L - 1, lo, hi, rest):
                yield (n,) + t


def _nf_row(rs: RewriteSystem, u: tuple, a: Element, w: tuple) -> dict:
    out: dict = {}
    for word, c in a.terms.items():
        for w2, c2 in rs.word_normal_form(u + word + w).items():
            _acc(out, w2, c * c2)
    return out


def _spread(word) -> int:
    return sum(abs(g.n) for g in word)


def _iter_rows(rs: RewriteSystem, kind: int, nodes: Counter, degree: int, lo: int, hi: int,
               sources=("overlap", "serre")):
    """Normal forms of ``u * g * w`` for relation generators g and normal filler words u, w.

    Candidates are visited in order of total absolute loop index, so rows built
    from small indices (the usual witnesses) come first.
    """
    cands = []
    gens = []
    for tag, gen in relation_generators(rs, kind, nodes, lo, hi, sources, degree):
        gw = next(iter(gen.terms))
        gnodes = Counter(g.i for g in gw)
        gdeg = sum(g.n for g in gw)
        if gnodes - nodes:
            continue
        rest = nodes - gnodes
        L = sum(rest.values())
        if not L * lo <= degree - gdeg <= L * hi:
            continue
        gi = len(gens)
        gens.append([tag, gen, False])
        for fill in _words_on(rs, kind, rest, lo, hi, degree - gdeg):
            cands.append((_spread(gw) + _spread(fill), gi, fill))
    cands.sort(key=lambda t: (t[0], t[1], t[2]))
    for _, gi, fill in cands:
        entry = gens[gi]
        if not entry[2]:
            entry[1] = rs.relation_normal_form((kind, entry[0]), entry[1])
            entry[2] = True
        gen = entry[1]
        if not gen:
            continue
        for p in range(len(fill) + 1):
            u, w = fill[:p], fill[p:]
            if not (rs.is_normal_word(u) and rs.is_normal_word(w)):
                continue
            r = _nf_row(rs, u, gen, w)
            if r:
                yield r


def _eliminate_mod(piv: dict, rows: list, order: list, x: int, p: int = PRIME):
    """Add rows to an echelon form over GF(p), pivoting on the largest column.

    ``piv`` maps pivot column -> (reduced row, source index, pivot columns used).
    """
    for idx in order:
        r = {c: v.evaluate_mod(x, p) for c, v in rows[idx].items()}
        r = {c: v for c, v in r.items() if v}
        used = []
        while r:
            c = max(r)
            hit = piv.get(c)
            if hit is None:
                inv = pow(r[c], p - 2, p)
                piv[c] = ({k: v * inv % p for k, v in r.items()}, idx, used)
                break
            used.append(c)
            f = r[c]
            for k, v in hit[0].items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    del r[k]
    return piv


def _reduce_mod(piv: dict, target: dict, x: int, p: int = PRIME):
    r = {c: v.evaluate_mod(x, p) for c, v in target.items()}
    r = {c: v for c, v in r.items() if v}
    used = []
    while r:
        c = max(r)
        hit = piv.get(c)
        if hit is None:
            return None
        used.append(c)
        f = r[c]
        for k, v in hit[0].items():
            nv = (r.get(k, 0) - f * v) % p
            if nv:
                r[k] = nv
            else:
                del r[k]
    return used


def _exact_in_span(rows: list, target: dict) -> bool:
    """Exact test over Q(q) that ``target`` lies in the span of ``rows``."""
    piv: dict = {}
    for r in rows:
        r = dict(r)
        while r:
            c = max(r)
            hit = piv.get(c)
            if hit is None:
                inv = ONE / r[c]
                piv[c] = {k: v * inv for k, v in r.items()}
                break
            f = r[c]
            for k, v in hit.items():
                nv = r.get(k, ZERO) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    r = dict(target)
    while r:
        c = max(r)
        hit = piv.get(c)
        if hit is None:
            return False
        f = r[c]
        for k, v in hit.items():
            nv = r.get(k, ZERO) - f * v
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)
    return True


def prove_component(rs: RewriteSystem, kind: int, target: dict, max_margin: int = 1,
                    rng: random.Random | None = None, max_rows: int = 200_000) -> CertificateResult:
    """Try to write ``target`` (normal words of one component) as a combination of ideal rows.

    Rows are produced lazily and put in modular echelon form at doubling
    checkpoints; as soon as the target reduces to zero modulo p, the rows it
    depends on are re-checked exactly over Q(q).
    """
    rng = rng or random.Random(0)
    words = list(target)
    nodes = Counter(g.i for g in words[0])
    degree = sum(g.n for g in words[0])
    idx = [g.n for w in words for g in w]
    base_lo, base_hi = min(idx), max(idx)
    built = 0
    # Serre-type rows alone first, then overlaps in the same window, then wider windows
    stages = [(0, ("serre",), True), (0, ("overlap",), False)]
    stages += [(m, ("overlap", "serre"), True) for m in range(1, max_margin + 1)]
    rows: list = []
    piv: dict = {}
    x = rng.randrange(2, PRIME - 1)
    for margin, sources, reset in stages:
        if reset:
            rows, piv = [], {}
            x = rng.randrange(2, PRIME - 1)
        lo, hi = base_lo - margin, base_hi + margin
        done = len(rows)
        checkpoint = max(32, 2 * done)
        gen = _iter_rows(rs, kind, nodes, degree, lo, hi, sources)
        exhausted = False
        while not exhausted:
            for r in gen:
                rows.append(r)
                if len(rows) >= checkpoint:
                    break
            else:
                exhausted = True
            built = len(rows)
            if built > max_rows:
                return CertificateResult(False, built, 0, margin, "row budget exhausted")
            checkpoint = 2 * len(rows)
            if len(rows) == done:
                continue
            # rebuilding from all rows keeps the short-rows-first order, which
            # limits fill-in; the doubling schedule bounds the total at twice one pass
            order = sorted(range(len(rows)), key=lambda k: (len(rows[k]), k))
            done = len(rows)
            piv = {}
            try:
                _eliminate_mod(piv, rows, order, x)
                used = _reduce_mod(piv, target, x)
            except ZeroDivisionError:
                rows, piv, done = [], {}, 0
                x = rng.randrange(2, PRIME - 1)
                gen = _iter_rows(rs, kind, nodes, degree, lo, hi, sources)
                exhausted = False
                continue
            if used is None:
                continue
            need = set()
            stack = list(used)
            while stack:
                c = stack.pop()
                if c in need:
                    continue
                need.add(c)
                stack.extend(piv[c][2])
            src = sorted(piv[c][1] for c in need)
            chosen = sorted((rows[k] for k in src), key=len)
            if _exact_in_span(chosen, target):
                return CertificateResult(True, built, len(src), margin)
    return CertificateResult(False, built, 0, max_margin, "no combination found in window")


def _prove_block(rs: RewriteSystem, kind: int, terms: dict, max_margin: int, rng) -> CertificateResult:
    comps: dict = {}
    for w, c in terms.items():
        comps.setdefault(_component_key(kind, w), {})[w] = c
    built = used = margin = 0
    for key in sorted(comps, key=repr):
        res = prove_component(rs, kind, comps[key], max_margin, rng)
        built += res.rows_built
        used += res.rows_used
        margin = max(margin, res.margin)
        if not res.proved:
            return CertificateResult(False, built, used, margin, res.detail)
    return CertificateResult(True, built, used, margin)


def _split(word: tuple):
    i = 0
    while i < len(word) and word[i].kind == XM:
        i += 1
    j = len(word)
    while j > i and word[j - 1].kind == XP:
        j -= 1
    return word[:i], word[i:j], word[j:]


def prove_normal_form(rs: RewriteSystem, nf: Element, max_margin: int = 1, seed: int = 0) -> CertificateResult:
    """Certificate that a nonzero normal form vanishes in the algebra.

    Terms are grouped by everything outside the X^+ block (then, failing that,
    outside the X^- block); the X-block parts of each group are proved to lie
    in the ideal.  The two-sided ideal then contains the whole element.
    """
    rng = random.Random(seed)
    last = CertificateResult(False, 0, 0, 0, "no X-block grouping applies")
    for kind in (XP, XM):
        groups: dict = {}
        for w, c in nf.terms.items():
            lo, mid, hi = _split(w)
            key, part = (lo + mid, hi) if kind == XP else (mid + hi, lo)
            groups.setdefault(key, {})[part] = c
        if any(() in g for g in groups.values()):
            continue
        built = used = margin = 0
        ok = True
        for key in sorted(groups, key=repr):
            res = _prove_block(rs, kind, groups[key], max_margin, rng)
            built += res.rows_built
            used += res.rows_used
            margin = max(margin, res.margin)
            if not res.proved:
                ok = False
                last = CertificateResult(False, built, used, margin, res.detail)
                break
        if ok:
            return CertificateResult(True, built, used, margin)
    return last


prove_zero = prove_normal_form
