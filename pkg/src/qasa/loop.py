"""Quantum loop modules L(V; b) = V (x) K[t, t^{-1}] on a finite window of t-degrees.

A vector of t-degree s is written w(s).  A generator of loop degree m sends
w(s) to (x w)(s + m); D acts on w(s) by q^{s+b}.  Only slices
``s_min..s_max`` are stored, and any action leaving the window raises
:class:`WindowOverflow` instead of being truncated.

``b`` is an exact rational.  q^b is kept symbolic: every defining relation has
the same net number of D letters in each term, so q^b factors out of each
relation, and the checks here evaluate D on w(s) as q^s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebra import CH, D, H, K, XM, XP, Generator
from .linalg import ExactReducer, SMat, kernel, rank
from .modules import Module, ModuleError, RelationCheck, eigenvalue
from .scalars import ZERO, QScalar

__all__ = [
    "LoopModule", "WindowOverflow", "InconclusiveWindow", "LoopRelationReport", "Component",
    "Decomposition", "build_loop_module", "check_relations_on_loop_module", "loop_decompose",
    "cartan_period", "evaluation_map", "check_evaluation_map", "hw_vector_in_component",
]

DEFAULT_RELATION_WINDOW = 2


class WindowOverflow(ModuleError):
    """An action would leave the stored degree window."""


class InconclusiveWindow(ModuleError):
    """The window is too small for the requested check."""


def _net_D(word) -> int:
    return sum(g.n for g in word if g.kind == D)


class LoopModule:
    def __init__(self, base: Module, b, s_min: int, s_max: int):
        if base.has_D:
            raise ModuleError("the base of a loop module must be a module without D")
        if s_min > s_max:
            raise ValueError("empty degree window")
        self.base = base
        self.rd = base.rd
        self.b = Fraction(b)
        self.s_min, self.s_max = s_min, s_max

    @property
    def slices(self) -> range:
        return range(self.s_min, self.s_max + 1)

    @property
    def dim(self) -> int:
        return len(self.slices) * self.base.dim

    def in_window(self, s: int) -> bool:
        return self.s_min <= s <= self.s_max

    def d_exponent(self, s: int) -> Fraction:
        """D acts on slice s by q to this power."""
        return s + self.b

    def d_exponent_text(self, s: int) -> str:
        """The exponent s + b as text, with b kept separate unless it is zero."""
        return f"{s}+{self.b}" if self.b else str(s)

    def act(self, g: Generator, s: int, w: list) -> tuple:
        """``g . w(s)`` as ``(slice, vector)``.  D is returned with q^b stripped."""
        if not self.in_window(s):
            raise WindowOverflow(f"slice {s} is outside [{self.s_min}, {self.s_max}]")
        if g.kind == D:
            return s, [x * QScalar.qpow(g.n * s) for x in w]
        t = s + g.degree
        if not self.in_window(t):
            raise WindowOverflow(f"{g!r} maps slice {s} to {t}, outside [{self.s_min}, {self.s_max}]")
        return t, self.base.matrix(g).apply(w)

    def word_operator(self, word: tuple, s: int) -> tuple:
        """``(target slice, scalar, base matrix)`` for ``word`` applied to slice s.

        The scalar collects the D letters (q^b stripped); raises WindowOverflow
        if any intermediate slice leaves the window.
        """
        if not self.in_window(s):
            raise WindowOverflow(f"slice {s} is outside the window")
        t = s
        e = 0
        rest = []
        for g in reversed(word):
            if g.kind == D:
                e += g.n * t
                continue
            t += g.degree
            if not self.in_window(t):
                raise WindowOverflow(f"word leaves the window at slice {t}")
            rest.append(g)
        return t, QScalar.qpow(e), self.base.word_matrix(tuple(reversed(rest)))

    def to_json(self) -> dict:
        return {"base": self.base.label, "b": str(self.b), "window": [self.s_min, self.s_max],
                "base_dim": self.base.dim, "dim": self.dim}


def build_loop_module(V: Module, b=0, window=(-4, 4)) -> LoopModule:
    s_min, s_max = window
    return LoopModule(V, b, s_min, s_max)


# ----------------------------------------------------------------------
# relations on interior slices
# ----------------------------------------------------------------------

@dataclass
class LoopRelationReport:
    window: tuple
    relation_window: int
    checks: list = field(default_factory=list)  # RelationCheck per (instance, slice)
    unchecked: list = field(default_factory=list)  # instances with no slice fully inside

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def conclusive(self) -> bool:
        return not self.unchecked

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def instances_checked(self) -> int:
        return len({c.name.rsplit("@", 1)[0] for c in self.checks})

    def to_json(self) -> dict:
        return {
            "window": list(self.window),
            "relation_window": self.relation_window,
            "slice_checks": len(self.checks),
            "instances_checked": self.instances_checked(),
            "unchecked": list(self.unchecked),
            "failed": [c.name for c in self.failures],
            "pass": self.passed and self.conclusive,
        }


def check_relations_on_loop_module(lm: LoopModule, relation_window: int = DEFAULT_RELATION_WINDOW,
                                   instances=None) -> LoopRelationReport:
    """Every defining relation, on every slice where all its words stay in the window."""
    from .suites import definition_relations

    if lm.s_max - lm.s_min < 2 * relation_window:
        raise InconclusiveWindow(
            f"inconclusive: window [{lm.s_min}, {lm.s_max}] is too small for relation window {relation_window}")
    if instances is None:
        instances = definition_relations(lm.rd, relation_window)
    report = LoopRelationReport((lm.s_min, lm.s_max), relation_window)
    n = lm.base.dim
    for inst in instances:
        diff = inst.lhs - inst.rhs
        nets = {_net_D(w) for w in list(inst.lhs.terms) + list(inst.rhs.terms)}
        if len(nets) > 1:
            raise ModuleError(f"{inst.name}: terms differ in D-degree, q^b does not factor out")
        hit = False
        for s in lm.slices:
            out: dict = {}
            try:
                for w, c in diff.items():
                    t, sc, m = lm.word_operator(w, s)
                    acc = out.get(t, SMat(n))
                    out[t] = acc + m.scale(c * sc)
            except WindowOverflow:
                continue
            hit = True
            nnz = sum(m.nnz() for m in out.values())
            report.checks.append(RelationCheck(f"{inst.name}@s={s}", nnz == 0, nnz))
        if not hit:
            report.unchecked.append(inst.name)
    return report


# ----------------------------------------------------------------------
# decomposition
# ----------------------------------------------------------------------

def cartan_period(lm: LoopModule, v: list, bound: int | None = None) -> tuple:
    """``(r, degrees)``: the degrees s, 0 < |s| <= bound, where some h_i(s) acts
    nonzero on the eigenvector v, and r = their gcd (0 if there are none)."""
    if bound is None:
        bound = lm.s_max - lm.s_min
    degs = []
    for s in range(-bound, bound + 1):
        if s == 0:
            continue
        for i in lm.rd.index_set:
            lam = eigenvalue(lm.base.matrix(Generator(H, i, s)), v)
            if lam:
                degs.append(s)
                break
    r = 0
    for s in degs:
        r = gcd(r, abs(s))
    return r, degs


def _generators(rd, gen_window: int) -> list:
    gens = []
    for i in rd.index_set:
        for m in range(-gen_window, gen_window + 1):
            gens.append(Generator(XP, i, m))
            gens.append(Generator(XM, i, m))
            if m:
                gens.append(Generator(H, i, m))
        gens.append(Generator(K, i, 1))
        gens.append(Generator(K, i, -1))
    return gens


class _Span:
    def __init__(self):
        self.red = ExactReducer()
        self.vectors: list = []

    def add(self, w: list) -> bool:
        row = {k: x for k, x in enumerate(w) if x}
        if not row:
            return False
        if self.red.add(row, len(self.vectors)):
            self.vectors.append(list(w))
            return True
        return False

    @property
    def dim(self) -> int:
        return len(self.vectors)


@dataclass
class Component:
    residue: int
    start: int  # slice of the generating vector v(i)
    spans: dict  # slice -> list of basis vectors (base coordinates)
    overflowed: bool = False

    def dims(self) -> dict:
        return {s: len(vs) for s, vs in sorted(self.spans.items())}


@dataclass
class Decomposition:
    r: int
    degrees: list
    components: list
    interior: list
    slice_sums: dict
    independent: dict

    @property
    def certified(self) -> bool:
        return bool(self.interior) and all(self.independent.values())

    def to_json(self, base_dim: int) -> dict:
        return {
            "r": self.r,
            "components": len(self.components),
            "interior": self.interior,
            "slice_dims": [self.slice_sums[s] for s in self.interior],
            "component_dims": [[c.dims()[s] for s in self.interior] for c in self.components],
            "direct_sum": self.certified and all(self.slice_sums[s] == base_dim for s in self.interior),
        }


def _generate(lm: LoopModule, start: int, v: list, gens: list) -> Component:
    spans: dict = {s: _Span() for s in lm.slices}
    spans[start].add(v)
    queue = [(start, list(v))]
    overflow = False
    while queue:
        s, w = queue.pop()
        for g in gens:
            try:
                t, u = lm.act(g, s, w)
            except WindowOverflow:
                overflow = True
                continue
            if spans[t].add(u):
                queue.append((t, spans[t].vectors[-1]))
    return Component(0, start, {s: sp.vectors for s, sp in spans.items()}, overflow)


def loop_decompose(lm: LoopModule, v: list, gen_window: int = 1, margin: int = 1) -> Decomposition:
    """Split L(V; b) into the components U v(i), restricted to the window.

    Interior slices are those at distance >= ``margin`` from both window edges.
    """
    rd = lm.rd
    r, degs = cartan_period(lm, v)
    interior = [s for s in lm.slices if lm.s_min + margin <= s <= lm.s_max - margin]
    if not interior:
        raise InconclusiveWindow(f"inconclusive: window [{lm.s_min}, {lm.s_max}] has no interior slice")
    starts = list(range(r)) if r > 0 else list(lm.slices)
    for s in starts:
        if not lm.in_window(s):
            raise InconclusiveWindow(f"inconclusive: window does not contain slice {s} for residue {s}")
    gens = _generators(rd, gen_window)
    comps = []
    for i in starts:
        c = _generate(lm, i, v, gens)
        c.residue = i
        comps.append(c)
    sums, indep = {}, {}
    n = lm.base.dim
    for s in interior:
        vecs = [w for c in comps for w in c.spans[s]]
        sums[s] = len(vecs)
        indep[s] = rank(vecs) == len(vecs) if vecs else True
    return Decomposition(r, degs, comps, interior, sums, indep)


# ----------------------------------------------------------------------
# evaluation map
# ----------------------------------------------------------------------

def evaluation_map(component: Component, s: int, w: list) -> list:
    """Set t = 1: ``w(s) -> w``."""
    return list(w)


def check_evaluation_map(lm: LoopModule, comp: Component, interior, gen_window: int = 1) -> dict:
    """Intertwining on sampled generators, and rank of the image."""
    gens = _generators(lm.rd, gen_window) + [Generator(CH, 0, 1), Generator(CH, 0, -1)]
    samples = 0
    ok = True
    for s in interior:
        for w in comp.spans[s]:
            for g in gens:
                try:
                    t, u = lm.act(g, s, w)
                except WindowOverflow:
                    continue
                samples += 1
                if evaluation_map(comp, t, u) != lm.base.matrix(g).apply(evaluation_map(comp, s, w)):
                    ok = False
    images = [evaluation_map(comp, s, w) for s in interior for w in comp.spans[s]]
    rk = rank(images) if images else 0
    return {"intertwines": ok, "samples": samples, "rank": rk, "full_rank": rk == lm.base.dim}


def hw_vector_in_component(lm: LoopModule, comp: Component, interior, window: int = 2):
    """A nonzero vector of the component killed by every X^+_i(m), |m| <= window.

    Searches interior slices from the generating slice outward; returns
    ``(slice, vector)`` or None.
    """
    ops = [lm.base.matrix(Generator(XP, i, m)) for i in lm.rd.index_set for m in range(-window, window + 1)]
    order = sorted(interior, key=lambda s: (abs(s - comp.start), s))
    for s in order:
        if not all(lm.in_window(s + m) for m in (-window, window)):
            continue
        basis = comp.spans[s]
        if not basis:
            continue
        # columns: coefficients on the slice basis
        rows = []
        for op in ops:
            imgs = [op.apply(w) for w in basis]
            for k in range(lm.base.dim):
                row = [img[k] for img in imgs]
                if any(row):
                    rows.append(row)
        ker = kernel(rows, len(basis))
        if ker:
            c = ker[0]
            vec = [ZERO] * lm.base.dim
            for coef, w in zip(c, basis):
                if coef:
                    vec = [x + coef * y for x, y in zip(vec, w)]
            if any(vec):
                return s, vec
    return None
