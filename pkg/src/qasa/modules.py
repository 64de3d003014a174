"""Finite-dimensional exact weight modules.

A :class:`Module` maps each loop generator to a sparse matrix over Q(q).
Matrices are built lazily from an action rule and cached; products of
generators (words) are cached by prefix, so evaluating many relation
instances that share letters stays cheap.

Constructors run a relation gate: every defining relation over a window of
loop indices is evaluated as a matrix identity, and a failure aborts the
construction with the failing instances attached.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .algebra import CH, D, H, K, XM, XP, Generator
from .linalg import SMat, kernel
from .rootdata import RootDatum
from .scalars import ONE, ZERO, QScalar, TruncSeries, _coerce, format_scalar, series_log

__all__ = [
    "Module", "ModuleError", "ModuleRelationError", "NotAnEigenvector", "RelationCheck",
    "RelationReport", "IntegrabilityReport", "trivial_module", "build_natural_evaluation_module",
    "node_parameters", "direct_sum", "scalar_cartan_module", "check_relations_on_module",
    "check_identities_on_module", "check_integrability", "integrability_report",
    "find_highest_weight_vectors", "eigenvalue", "weight_spaces",
]


class ModuleError(ValueError):
    """Raised for an operation a module cannot perform."""


class NotAnEigenvector(ModuleError):
    pass


class ModuleRelationError(ModuleError):
    """A constructor's relation gate failed; ``report`` lists the failures."""

    def __init__(self, report: "RelationReport", label: str):
        fails = report.failures
        shown = ", ".join(c.name for c in fails[:5])
        more = f" (+{len(fails) - 5} more)" if len(fails) > 5 else ""
        super().__init__(f"{label}: {len(fails)} relation instance(s) fail at window {report.window}: {shown}{more}")
        self.report = report


def _scalar_str(c) -> str:
    return format_scalar(_coerce(c))


class Module:
    """A finite-dimensional module given by generator matrices.

    ``rule(g)`` returns the matrix of generator ``g`` as an :class:`SMat`.
    ``has_D`` is False for modules over the subalgebra without D.
    """

    def __init__(self, rd: RootDatum, parities, rule, *, has_D: bool = False, label: str = "module",
                 description: dict | None = None):
        self.rd = rd
        self.parities = tuple(int(p) for p in parities)
        self.dim = len(self.parities)
        self.has_D = has_D
        self.label = label
        self.description = description or {}
        self._rule = rule
        self._mats: dict = {}
        self._words: dict = {(): SMat.identity(self.dim)}
        self._lock = threading.RLock()

    # ---- generator and word matrices ---------------------------------

    def _check(self, g: Generator) -> None:
        if g.kind in (XP, XM, H, K):
            self.rd.check_index(g.i)
        if g.kind == H and g.n == 0:
            raise ModuleError("h_i(0) is not a generator")
        if g.kind == D and not self.has_D:
            raise ModuleError(f"{self.label} has no action of D")

    def matrix(self, g: Generator) -> SMat:
        m = self._mats.get(g)
        if m is not None:
            return m
        with self._lock:
            m = self._mats.get(g)
            if m is None:
                self._check(g)
                m = self._rule(g)
                if (m.nrows, m.ncols) != (self.dim, self.dim):
                    raise ModuleError(f"rule returned a {m.nrows}x{m.ncols} matrix for {g!r}")
                self._mats[g] = m
        return m

    def word_matrix(self, word: tuple) -> SMat:
        m = self._words.get(word)
        if m is not None:
            return m
        m = self.word_matrix(word[:-1]) @ self.matrix(word[-1])
        with self._lock:
            self._words[word] = m
        return m

    def element_matrix(self, e) -> SMat:
        if isinstance(e, Generator):
            return self.matrix(e)
        out = SMat(self.dim)
        for w, c in e.items():
            out = out + self.word_matrix(w).scale(c)
        return out

    def apply(self, x, v: list) -> list:
        """Action of a generator or algebra element on a coordinate vector."""
        if isinstance(x, Generator):
            return self.matrix(x).apply(v)
        out = [ZERO] * self.dim
        for w, c in x.items():
            u = list(v)
            for g in reversed(w):
                u = self.matrix(g).apply(u)
            out = [a + c * b if b else a for a, b in zip(out, u)]
        return out

    def clear_word_cache(self) -> None:
        with self._lock:
            self._words = {(): SMat.identity(self.dim)}

    # ---- weights -------------------------------------------------------

    def weight_key(self, k: int) -> tuple:
        """Exponents of q in the K_i-eigenvalues of basis vector k (None if not a power of q)."""
        out = []
        for i in self.rd.index_set:
            m = self.matrix(Generator(K, i, 1))
            if not m.is_diagonal():
                raise ModuleError("K action is not diagonal in the given basis")
            out.append(m.get(k, k).is_unit_monomial())
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "root_datum": self.rd.to_json(),
            "dim": self.dim,
            "parities": list(self.parities),
            "has_D": self.has_D,
            "rule": self.description,
        }


def _vec_is_zero(v) -> bool:
    return not any(v)


def eigenvalue(m: SMat, v: list):
    """The eigenvalue of ``m`` on ``v``, or raise :class:`NotAnEigenvector`."""
    if _vec_is_zero(v):
        raise NotAnEigenvector("zero vector")
    mv = m.apply(v)
    k = next(i for i, x in enumerate(v) if x)
    lam = mv[k] / v[k]
    if any(a != lam * b for a, b in zip(mv, v)):
        raise NotAnEigenvector("vector is not an eigenvector")
    return lam


def weight_spaces(mod: Module) -> dict:
    """Basis indices grouped by their K-weight key, in sorted key order."""
    groups: dict = {}
    for k in range(mod.dim):
        groups.setdefault(mod.weight_key(k), []).append(k)
    return dict(sorted(groups.items(), key=lambda t: tuple((x is None, x or 0) for x in t[0])))


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def trivial_module(rd: RootDatum) -> Module:
    """One-dimensional module: X and h act by 0, K and C^{1/2} by 1."""

    def rule(g):
        if g.kind in (K, CH, D):
            return SMat.identity(1)
        return SMat(1)

    return Module(rd, (0,), rule, label="trivial", description={"kind": "trivial"})


def scalar_cartan_module(rd: RootDatum, kappa=-1, node: int = 1) -> Module:
    """Rank-one module with K_node acting by ``kappa`` and everything else trivial.

    The relations force ``kappa = kappa^{-1}``; ``kappa = -1`` satisfies all of
    them but is not a power of q, so the module is not of type 1.
    """
    rd.check_index(node)
    kappa = _coerce(kappa)

    def rule(g):
        if g.kind == K and g.i == node:
            return SMat.diag([kappa if g.n > 0 else kappa.inverse()])
        if g.kind in (K, CH, D):
            return SMat.identity(1)
        return SMat(1)

    return Module(rd, (0,), rule, label=f"scalar-K{node}",
                  description={"kind": "scalar-cartan", "node": node, "kappa": _scalar_str(kappa)})


def _block_diag(a: SMat, b: SMat) -> SMat:
    rows = {r: dict(row) for r, row in a.rows.items()}
    off = a.nrows
    for r, row in b.rows.items():
        rows[r + off] = {c + off: v for c, v in row.items()}
    return SMat(a.nrows + b.nrows, a.ncols + b.ncols, rows)


def direct_sum(m1: Module, m2: Module) -> Module:
    if m1.rd != m2.rd:
        raise ModuleError("direct sum needs modules over the same root datum")

    def rule(g):
        return _block_diag(m1.matrix(g), m2.matrix(g))

    return Module(m1.rd, m1.parities + m2.parities, rule, has_D=m1.has_D and m2.has_D,
                  label=f"({m1.label})+({m2.label})",
                  description={"kind": "direct-sum", "summands": [m1.to_json(), m2.to_json()]})


def node_parameters(rd: RootDatum, a) -> dict:
    """Spectral parameter per node: ``a_1 = a``, ``a_{i+1} = a_i q^{l_{i+1}}``.

    A single ``a^n`` for every node violates the X-X relation between adjacent
    nodes; shifting by ``q^{l_{i+1}}`` along the diagram is what makes it hold.
    """
    a = _coerce(a)
    out = {}
    cur = a
    for i in rd.index_set:
        if i > 1:
            cur = cur * QScalar.qpow(rd.sign(i))
        out[i] = cur
    return out


class _NaturalRule:
    """Action rule of the natural evaluation module.

    X^{+-}_i(n) are elementary matrices scaled by ``a_i^n``; the Cartan
    currents phi are read off the X^+X^- brackets, and h comes from the
    logarithm of the phi generating series.
    """

    def __init__(self, rd: RootDatum, a, corrupt: bool):
        self.rd = rd
        self.n = rd.M + rd.N
        self.params = node_parameters(rd, a)
        self.corrupt = corrupt
        self.parity = tuple(1 if k > rd.M else 0 for k in range(1, self.n + 1))
        self._h: dict = {}  # (i, sign) -> (order, [per-basis eigenvalue lists])
        self.mod: Module | None = None

    def x_matrix(self, kind, i, n) -> SMat:
        c = self.params[i] ** n
        if kind == XP:
            return SMat.unit(self.n, i - 1, i, c)
        if self.corrupt and i == 1:
            c = -c
        return SMat.unit(self.n, i, i - 1, c)

    def k_matrix(self, i, e) -> SMat:
        return SMat.diag([QScalar.qpow(e * self.rd.eps_alpha_pairing(k, i)) for k in range(1, self.n + 1)])

    def bracket(self, i, r) -> SMat:
        """Super bracket ``[X^+_i(r), X^-_i(0)]``."""
        xp, xm = self.x_matrix(XP, i, r), self.x_matrix(XM, i, 0)
        if self.rd.is_odd_index(i):
            return xp @ xm + xm @ xp
        return xp @ xm - xm @ xp

    def phi_matrix(self, i, sign, r) -> SMat:
        if sign * r < 0:
            return SMat(self.n)
        if r == 0:
            return self.k_matrix(i, sign)
        qi = self.rd.q_i(i)
        return self.bracket(i, r).scale((qi - qi.inverse()) * sign)

    def h_eigen(self, i, sign, s) -> list:
        order = abs(s)
        hit = self._h.get((i, sign))
        if hit is None or hit[0] < order:
            new = max(order, 2 * hit[0] if hit else 8)
            self._h[(i, sign)] = hit = (new, self._h_series(i, sign, new))
        return [col[order] for col in hit[1]]

    def _h_series(self, i, sign, order) -> list:
        qi = self.rd.q_i(i)
        mats = [self.phi_matrix(i, sign, sign * r) for r in range(order + 1)]
        for m in mats:
            if not m.is_diagonal():
                raise ModuleError(f"phi_{i} is not diagonal; cannot take the logarithm")
        scale = ONE / ((qi - qi.inverse()) * sign)
        out = []
        for k in range(self.n):
            k0 = mats[0].get(k, k)
            series = TruncSeries(0, tuple(m.get(k, k) / k0 for m in mats))
            lg = series_log(series)
            out.append([c * scale for c in lg.coeffs])
        return out

    def __call__(self, g: Generator) -> SMat:
        if g.kind in (XP, XM):
            return self.x_matrix(g.kind, g.i, g.n)
        if g.kind == K:
            return self.k_matrix(g.i, g.n)
        if g.kind == CH:
            return SMat.identity(self.n)
        if g.kind == H:
            sign = 1 if g.n > 0 else -1
            return SMat.diag(self.h_eigen(g.i, sign, g.n))
        raise ModuleError(f"no action for {g!r}")


GATE_WINDOW = 3


def build_natural_evaluation_module(rd: RootDatum, a=ONE, *, window: int = GATE_WINDOW, check: bool = True,
                                    corrupt: bool = False) -> Module:
    """The (M+N)-dimensional evaluation module with spectral parameter ``a``.

    Basis e_1..e_{M+N}, e_k odd for k > M.  ``corrupt`` flips the sign of
    X^-_1 (a mutation hook for testing the gate).  With ``check`` the defining
    relations are verified at ``window`` and :class:`ModuleRelationError` is
    raised on any failure.
    """
    a = _coerce(a)
    if not a:
        raise ModuleError("spectral parameter must be nonzero")
    rule = _NaturalRule(rd, a, corrupt)
    desc = {
        "kind": "natural-evaluation",
        "a": _scalar_str(a),
        "node_parameters": {str(i): _scalar_str(c) for i, c in rule.params.items()},
        "X+": "X^+_i(n) = a_i^n E_{i,i+1}",
        "X-": "X^-_i(n) = a_i^n E_{i+1,i}",
        "K": "K_i e_k = q^{(eps_k, alpha_i)} e_k",
        "corrupt": corrupt,
    }
    label = "natural" + ("-corrupt" if corrupt else "")
    mod = Module(rd, rule.parity, rule, label=label, description=desc)
    rule.mod = mod
    if check:
        report = check_relations_on_module(mod, window)
        if not report.passed:
            raise ModuleRelationError(report, label)
        mod.gate = report
    return mod


# ----------------------------------------------------------------------
# verification
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RelationCheck:
    name: str
    passed: bool
    residual_nnz: int = 0

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "residual_nnz": self.residual_nnz}


@dataclass
class RelationReport:
    window: int
    checks: list = field(default_factory=list)
    skipped: int = 0  # instances needing D on a module without D

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self, full: bool = False) -> dict:
        out = {
            "window": self.window,
            "checked": len(self.checks),
            "skipped": self.skipped,
            "failed": [c.name for c in self.failures],
            "pass": self.passed,
        }
        if full:
            out["checks"] = [c.to_json() for c in self.checks]
        return out


def _needs_D(inst) -> bool:
    for e in (inst.lhs, inst.rhs):
        for w in e.terms:
            if any(g.kind == D for g in w):
                return True
    return False


def check_identities_on_module(mod: Module, instances, window: int = -1) -> RelationReport:
    """Evaluate ``lhs - rhs`` of each instance as a matrix; exact comparison."""
    report = RelationReport(window)
    for inst in instances:
        if not mod.has_D and _needs_D(inst):
            report.skipped += 1
            continue
        res = mod.element_matrix(inst.lhs - inst.rhs)
        report.checks.append(RelationCheck(inst.name, res.is_zero(), res.nnz()))
    return report


def check_relations_on_module(mod: Module, window: int) -> RelationReport:
    """Every defining relation with loop indices in ``[-window, window]``."""
    from .suites import definition_relations

    if window < 0:
        raise ValueError("window must be >= 0")
    return check_identities_on_module(mod, definition_relations(mod.rd, window), window)


@dataclass
class IntegrabilityReport:
    window: int
    type1: bool
    nilpotent: bool
    level_zero: bool
    problems: list = field(default_factory=list)

    @property
    def integrable(self) -> bool:
        return self.type1 and self.nilpotent

    def __bool__(self):
        return self.integrable

    def to_json(self) -> dict:
        return {"window": self.window, "type1": self.type1, "nilpotent": self.nilpotent,
                "level_zero": self.level_zero, "integrable": self.integrable, "problems": self.problems}


def integrability_report(mod: Module, window: int) -> IntegrabilityReport:
    problems = []
    type1 = True
    for i in mod.rd.index_set:
        m = mod.matrix(Generator(K, i, 1))
        if not m.is_diagonal():
            type1 = False
            problems.append(f"K_{i} not diagonal")
            continue
        for k, x in enumerate(m.diagonal()):
            if x.is_unit_monomial() is None:
                type1 = False
                problems.append(f"K_{i} eigenvalue {_scalar_str(x)} on e_{k + 1} is not a power of q")
    c = mod.matrix(Generator(CH, 0, 1))
    level_zero = c == SMat.identity(mod.dim)
    if not c.is_diagonal() or any(x.is_unit_monomial() is None for x in c.diagonal()):
        type1 = False
        problems.append("C^{1/2} is not diagonal with q-power eigenvalues")
    nil = True
    for kind in (XP, XM):
        for i in mod.rd.index_set:
            for m in range(-window, window + 1):
                if not (mod.matrix(Generator(kind, i, m)) ** (mod.dim + 1)).is_zero():
                    nil = False
                    problems.append(f"{Generator(kind, i, m)!r} is not nilpotent")
    return IntegrabilityReport(window, type1, nil, level_zero, problems)


def check_integrability(mod: Module, window: int) -> bool:
    """Type-1 weight decomposition plus exact nilpotency of every X^{+-}_i(m), |m| <= window."""
    return integrability_report(mod, window).integrable


def find_highest_weight_vectors(mod: Module, window: int = 1) -> list:
    """Basis of the joint kernel of X^+_i(m), |m| <= window, one weight space at a time."""
    if window < 0:
        raise ValueError("window must be >= 0")
    ops = [mod.matrix(Generator(XP, i, m)) for i in mod.rd.index_set for m in range(-window, window + 1)]
    out = []
    for _, cols in weight_spaces(mod).items():
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
