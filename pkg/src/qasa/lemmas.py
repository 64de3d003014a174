"""Instance checks of the highest-weight lemmas on a concrete module.

For each statement, the vectors satisfying the hypotheses over the window are
computed exactly (they form a subspace per weight space), and the conclusions
are checked on a basis of that subspace.  A statement whose hypothesis space
is zero is reported as vacuous, never as passed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .algebra import XP, Generator, LoopAlgebra
from .linalg import SMat, kernel
from .modules import Module, find_highest_weight_vectors, weight_spaces
from .rootdata import odd_segment_set, s_order_key
from .scalars import ZERO

__all__ = ["LemmaResult", "verify_lemma_instances"]


@dataclass
class LemmaResult:
    name: str
    status: str  # "pass", "fail" or "vacuous"
    candidates: int = 0
    checked: int = 0
    detail: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "candidates": self.candidates, "checked": self.checked}
        if self.detail:
            out["detail"] = self.detail
        return out


def _subspace(mod: Module, ops: list) -> list:
    """Basis of the common kernel of ``ops``, computed inside each weight space."""
    out = []
    for cols in weight_spaces(mod).values():
        rows = []
        for op in ops:
            for r in range(mod.dim):
                row = [op.get(r, c) for c in cols]
                if any(row):
                    rows.append(row)
        for kv in kernel(rows, len(cols)):
            v = [ZERO] * mod.dim
            for c, x in zip(cols, kv):
                v[c] = x
            out.append(v)
    return out


class _Ops:
    def __init__(self, mod: Module, window: int):
        self.mod = mod
        self.alg = LoopAlgebra(mod.rd)
        self.W = list(range(-window, window + 1))
        self._seg: dict = {}

    def x(self, i, m) -> SMat:
        return self.mod.matrix(Generator(XP, i, m))

    def seg(self, a, b, m) -> SMat:
        key = (a, b, m)
        if key not in self._seg:
            self._seg[key] = self.mod.element_matrix(self.alg.composite_root_vector(a, b, m))
        return self._seg[key]

    def even_nodes(self):
        return [i for i in self.mod.rd.index_set if i != self.mod.rd.M]

    def even_ops(self) -> list:
        return [self.x(i, m) for i in self.even_nodes() for m in self.W]

    def seg_ops(self, segs) -> list:
        return [self.seg(a, b, m) for a, b in segs for m in self.W]


def _segment_propagation(ops: _Ops, S: list, depth: int = 2) -> LemmaResult:
    res = LemmaResult("segment-propagation", "vacuous")
    bad = []
    for a, b in S:
        prev = s_order_key((a - 1, b - 1))
        hyp_segs = [t for t in S if s_order_key(t) > prev]
        concl_segs = [t for t in S if s_order_key(t) > s_order_key((a, b))]
        cands = _subspace(ops.mod, ops.even_ops() + ops.seg_ops(hyp_segs))
        res.candidates += len(cands)
        checks = ops.even_ops() + ops.seg_ops(concl_segs)
        for u in cands:
            for p in range(1, depth + 1):
                for ns in product(ops.W, repeat=p):
                    v = list(u)
                    for n in ns:
                        v = ops.seg(a, b, n).apply(v)
                    res.checked += 1
                    if any(any(op.apply(v)) for op in checks):
                        bad.append(f"(a,b)=({a},{b}) n={list(ns)}")
    if res.candidates:
        res.status = "fail" if bad else "pass"
    res.detail = bad[:10]
    return res


def _segment_cubes(ops: _Ops, S: list, depth: int = 2) -> LemmaResult:
    res = LemmaResult("segment-cubes-vanish", "vacuous")
    bad = []
    mod = ops.mod
    for a, b in S:
        hyp = []
        for r in range(depth + 1):
            for ns in product(ops.W, repeat=r):
                chain = SMat.identity(mod.dim)
                for n in reversed(ns):
                    chain = ops.seg(a, b, n) @ chain
                hyp += [op @ chain for op in ops.even_ops()]
        for p, k in product(ops.W, repeat=2):
            if (p - k) % 2 == 0:
                hyp.append(ops.seg(a, b, p) @ ops.seg(a, b, k))
        cands = _subspace(mod, hyp)
        res.candidates += len(cands)
        for u in cands:
            for p, i, j in product(ops.W, repeat=3):
                res.checked += 1
                w = ops.seg(a, b, p).apply(ops.seg(a, b, i).apply(ops.seg(a, b, j).apply(u)))
                if any(w):
                    bad.append(f"(a,b)=({a},{b}) triple ({p},{i},{j})")
            if not _terminal_exists(ops, a, b, u):
                bad.append(f"(a,b)=({a},{b}) no terminal vector within two steps")
    if res.candidates:
        res.status = "fail" if bad else "pass"
    res.detail = bad[:10]
    return res


def _terminal_exists(ops: _Ops, a, b, u) -> bool:
    layer = [u]
    for _ in range(3):
        nxt = []
        for w in layer:
            if not any(w):
                continue
            if all(not any(ops.seg(a, b, m).apply(w)) for m in ops.W):
                return True
            nxt += [ops.seg(a, b, m).apply(w) for m in ops.W]
        layer = nxt
    return False


def _odd_node_nilpotent(ops: _Ops, S: list) -> LemmaResult:
    res = LemmaResult("odd-node-nilpotent", "vacuous")
    mod = ops.mod
    cands = _subspace(mod, ops.even_ops() + ops.seg_ops(S))
    res.candidates = len(cands)
    if not cands:
        res.status = "fail"
        res.detail = ["no nonzero weight vector satisfies the vanishing conditions"]
        return res
    M = mod.rd.M
    xs = [ops.x(M, m) for m in ops.W]
    bad = []
    for u in cands:
        layer = [u]
        for _ in range(mod.dim + 1):
            layer = [x.apply(w) for w in layer for x in xs]
            layer = [w for w in layer if any(w)]
            layer = _independent(layer)
            if not layer:
                break
        res.checked += 1
        if layer:
            bad.append("X^+_M products do not vanish within dim+1 factors")
    res.status = "fail" if bad else "pass"
    res.detail = bad[:10]
    return res


def _independent(vecs: list) -> list:
    from .linalg import rref

    if not vecs:
        return []
    R, piv = rref(vecs)
    return [R[k] for k in range(len(piv))]


def _highest_weight_exists(mod: Module, window: int) -> LemmaResult:
    hw = find_highest_weight_vectors(mod, window)
    res = LemmaResult("highest-weight-exists", "pass" if hw else "fail", len(hw), len(hw))
    if not hw:
        res.detail = ["no nonzero vector is killed by every X^+_i(m)"]
    return res


def verify_lemma_instances(mod: Module, window: int) -> list:
    """Per-statement instance reports; a negative window yields only vacuous results."""
    names = ("segment-propagation", "segment-cubes-vanish", "odd-node-nilpotent", "highest-weight-exists")
    if window < 0:
        return [LemmaResult(n, "vacuous") for n in names]
    ops = _Ops(mod, window)
    S = odd_segment_set(mod.rd)
    return [_segment_propagation(ops, S), _segment_cubes(ops, S), _odd_node_nilpotent(ops, S), _highest_weight_exists(mod, window)]
