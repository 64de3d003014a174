"""Drinfeld data of a highest weight vector: polynomials P_i, the odd-node
series f, the K_M-eigenvalue c and the annihilating polynomial Q.

Everything is exact.  P_i is found by rational reconstruction of the phi
eigenseries (both expansions must match), Q by a nullspace computation on
stacked vectors X^-_M(n) v.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import H, K, XM, XP, Generator
from .linalg import SMat, solve
from .modules import Module, ModuleError, eigenvalue
from .scalars import ONE, ZERO, QScalar, TruncSeries, _coerce, format_scalar, series_exp

__all__ = [
    "NoMatch", "DependenceNotFound", "NotHighestWeight", "DrinfeldData", "HighestWeightReport",
    "phi_eigenseries", "phi_series_from_brackets", "synthesize_phi", "match_polynomial",
    "extract_drinfeld_data", "highest_weight_report", "round_trip", "f_window",
]

DEFAULT_T = 20
Q_WINDOW = 3


class NoMatch(ModuleError):
    """No polynomial of degree <= T/2 reproduces both phi expansions."""


class DependenceNotFound(ModuleError):
    """No linear recurrence of degree <= T/2 among the X^-_M(n) v."""


class NotHighestWeight(ModuleError):
    pass


def _fmt(c) -> str:
    return format_scalar(_coerce(c))


def _poly_json(p) -> list:
    return [_fmt(c) for c in p]


# ----------------------------------------------------------------------
# eigenseries
# ----------------------------------------------------------------------

def phi_eigenseries(mod: Module, i: int, sign: int, v: list, T: int = DEFAULT_T) -> TruncSeries:
    """Eigenvalue series of ``sum_n phi^{+-}_i(n) z^n`` on ``v``, built from K and h.

    ``sign=+1`` gives the expansion about z = 0, ``sign=-1`` the one about
    infinity (coefficient k is that of z^{-k}).
    """
    rd = mod.rd
    qi = rd.q_i(i)
    kappa = eigenvalue(mod.matrix(Generator(K, i, sign)), v)
    hs = [ZERO] + [eigenvalue(mod.matrix(Generator(H, i, sign * s)), v) for s in range(1, T + 1)]
    c = (qi - qi.inverse()) * sign
    ex = series_exp(TruncSeries(0, tuple(c * x for x in hs)))
    return TruncSeries(0, tuple(kappa * x for x in ex.coeffs), sign < 0)


def phi_series_from_brackets(mod: Module, i: int, sign: int, v: list, T: int = DEFAULT_T) -> TruncSeries:
    """The same series read off the X^+X^- relation on a level-zero module.

    ``phi^{+-}_i(r) = +-(q_i - q_i^{-1}) [X^+_i(r), X^-_i(0)]`` for ``+-r > 0``.
    """
    rd = mod.rd
    qi = rd.q_i(i)
    odd = rd.is_odd_index(i)
    out = [eigenvalue(mod.matrix(Generator(K, i, sign)), v)]
    xm = mod.matrix(Generator(XM, i, 0))
    for r in range(1, T + 1):
        xp = mod.matrix(Generator(XP, i, sign * r))
        br = xp @ xm + xm @ xp if odd else xp @ xm - xm @ xp
        w = br.apply(v)
        lam = _ratio(w, v)
        out.append(lam * (qi - qi.inverse()) * sign)
    return TruncSeries(0, tuple(out), sign < 0)


def _ratio(w: list, v: list) -> QScalar:
    k = next(j for j, x in enumerate(v) if x)
    lam = w[k] / v[k]
    if any(a != lam * b for a, b in zip(w, v)):
        raise ModuleError("vector is not an eigenvector of the bracket")
    return lam


def _series_div(num: list, den: list, T: int) -> list:
    if not den[0]:
        raise ZeroDivisionError("series division by a series with zero constant term")
    inv0 = ONE / den[0]
    out = []
    for n in range(T + 1):
        acc = num[n] if n < len(num) else ZERO
        for k in range(1, min(n, len(den) - 1) + 1):
            if den[k] and out[n - k]:
                acc = acc - den[k] * out[n - k]
        out.append(acc * inv0)
    return out


def synthesize_phi(P, qi: QScalar, T: int = DEFAULT_T, at_infinity: bool = False) -> TruncSeries:
    """Expansion of ``q_i^{deg P} P(z q_i^{-1}) / P(z q_i)`` about 0 or about infinity."""
    P = [_coerce(c) for c in P]
    d = len(P) - 1
    lead = qi ** d
    if not at_infinity:
        num = [lead * c * qi ** (-k) for k, c in enumerate(P)]
        den = [c * qi ** k for k, c in enumerate(P)]
    else:
        num = [lead * P[d - j] * qi ** (-(d - j)) for j in range(d + 1)]
        den = [P[d - j] * qi ** (d - j) for j in range(d + 1)]
    return TruncSeries(0, tuple(_series_div(num, den, T)), at_infinity)


def match_polynomial(plus: TruncSeries, minus: TruncSeries, qi: QScalar, T: int | None = None) -> tuple:
    """Minimal-degree P with P(0) = 1 whose synthesized phi-series match both expansions up to T."""
    if T is None:
        T = min(plus.order, minus.order)
    phi = [plus.coeff(n) for n in range(T + 1)]
    for d in range(T // 2 + 1):
        # sum_k p_k q_i^k phi_{n-k} = q_i^{d-n} p_n, unknowns p_1..p_d
        A, b = [], []
        for n in range(T + 1):
            row = []
            for k in range(1, d + 1):
                x = ZERO
                if k <= n:
                    x = qi ** k * phi[n - k]
                if k == n:
                    x = x - qi ** (d - n)
                row.append(x)
            rhs = -phi[n]
            if n == 0:
                rhs = rhs + qi ** d
            A.append(row)
            b.append(rhs)
        if d == 0:
            sol = [] if not any(b) else None
        else:
            sol = solve(A, b)
        if sol is None:
            continue
        P = (ONE,) + tuple(sol)
        if d and not P[-1]:
            continue
        if synthesize_phi(P, qi, T, False) != plus.truncate(T):
            continue
        if synthesize_phi(P, qi, T, True) != minus.truncate(T):
            continue
        return P
    raise NoMatch(f"no polynomial of degree <= {T // 2} matches both expansions to order {T}")


# ----------------------------------------------------------------------
# extraction
# ----------------------------------------------------------------------

@dataclass
class DrinfeldData:
    P: dict  # node -> coefficient tuple (constant term first)
    c: QScalar
    f: TruncSeries  # coefficients f_{-T}..f_T, stored with low = -T
    Q: tuple
    T: int
    checks: dict = field(default_factory=dict)

    def f_coeff(self, n: int) -> QScalar:
        if abs(n) > self.T:
            raise IndexError(f"f_{n} is outside the computed window [-{self.T}, {self.T}]")
        return self.f.coeff(n)

    def degrees(self) -> dict:
        return {i: len(p) - 1 for i, p in self.P.items()}

    def to_json(self) -> dict:
        return {
            "P": {str(i): _poly_json(p) for i, p in sorted(self.P.items())},
            "c": _fmt(self.c),
            "f": {"low": self.f.low, "coeffs": [_fmt(x) for x in self.f.coeffs]},
            "Q": _poly_json(self.Q),
            "T": self.T,
            "checks": dict(sorted(self.checks.items())),
        }


def f_window(mod: Module, v: list, T: int = DEFAULT_T) -> TruncSeries:
    """Eigenvalues of ``(phi^+_M(n) - phi^-_M(n)) / (q - q^{-1})`` for |n| <= T."""
    M = mod.rd.M
    plus = phi_eigenseries(mod, M, 1, v, T)
    minus = phi_eigenseries(mod, M, -1, v, T)
    q = QScalar.qpow(1)
    inv = ONE / (q - q.inverse())
    coeffs = [-minus.coeff(-n) * inv for n in range(-T, 0)]
    coeffs.append((plus.coeff(0) - minus.coeff(0)) * inv)
    coeffs += [plus.coeff(n) * inv for n in range(1, T + 1)]
    return TruncSeries(-T, tuple(coeffs))


def _is_hw(mod: Module, v: list, window: int) -> bool:
    for i in mod.rd.index_set:
        for m in range(-window, window + 1):
            if any(mod.matrix(Generator(XP, i, m)).apply(v)):
                return False
    return True


def _find_Q(mod: Module, v: list, R: int, dmax: int) -> tuple:
    M = mod.rd.M
    cache: dict = {}

    def u(n):
        if n not in cache:
            cache[n] = mod.matrix(Generator(XM, M, n)).apply(v)
        return cache[n]

    for d in range(dmax + 1):
        # sum_{k=0}^d a_k u(d-k+r) = 0 with a_0 = 1, all |r| <= R
        A, b = [], []
        for r in range(-R, R + 1):
            cols = [u(d - k + r) for k in range(1, d + 1)]
            target = u(d + r)
            for row in range(mod.dim):
                A.append([c[row] for c in cols])
                b.append(-target[row])
        if d == 0:
            if not any(b):
                return (ONE,)
            continue
        sol = solve(A, b)
        if sol is not None:
            return (ONE,) + tuple(sol)
    raise DependenceNotFound(f"no dependence of degree <= {dmax} among X^-_{M}(n) v, |r| <= {R}")


def _q_times_f_vanishes(Q: tuple, f: TruncSeries, T: int) -> bool:
    d = len(Q) - 1
    for n in range(-T + d, T + 1):
        acc = ZERO
        for s, a in enumerate(Q):
            if a:
                acc = acc + a * f.coeff(n - s)
        if acc:
            return False
    return True


def _nilpotency(mat: SMat, v: list, bound: int) -> int | None:
    w = list(v)
    for k in range(bound + 1):
        if not any(w):
            return k
        w = mat.apply(w)
    return None


def extract_drinfeld_data(mod: Module, v: list, T: int = DEFAULT_T, hw_window: int = 1,
                          q_window: int = Q_WINDOW) -> DrinfeldData:
    """Read off (P, c, f, Q) at the highest weight vector ``v`` and verify the constraints.

    ``hw_window`` bounds the loop indices checked for the highest weight
    condition; window 1 suffices for evaluation modules, where X^+_i(n) is a
    scalar multiple of X^+_i(0).
    """
    rd = mod.rd
    if T < 1:
        raise ValueError("truncation must be >= 1")
    if not _is_hw(mod, v, hw_window):
        raise NotHighestWeight(f"vector is not killed by all X^+_i(m), |m| <= {hw_window}")
    P = {}
    for i in rd.index_set:
        if i == rd.M:
            continue
        plus = phi_eigenseries(mod, i, 1, v, T)
        minus = phi_eigenseries(mod, i, -1, v, T)
        P[i] = match_polynomial(plus, minus, rd.q_i(i), T)
    c = eigenvalue(mod.matrix(Generator(K, rd.M, 1)), v)
    f = f_window(mod, v, T)
    Q = _find_Q(mod, v, q_window, T // 2)
    data = DrinfeldData(P, c, f, Q, T)
    q = QScalar.qpow(1)
    checks = {
        "P(0)=1": all(p[0] == ONE for p in P.values()),
        "Q(0)=1": Q[0] == ONE,
        "Qf=0": _q_times_f_vanishes(Q, f, T),
        "f0": (c - c.inverse()) / (q - q.inverse()) == f.coeff(0),
        "M-Q": True,  # _find_Q only returns a dependence valid for every |r| <= q_window
    }
    for i, p in P.items():
        xm = mod.matrix(Generator(XM, i, 0))
        w = (xm ** (len(p))).apply(v)
        checks[f"minus-nilpotent[{i}]"] = not any(w)
    data.checks = checks
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise ModuleError(f"Drinfeld data fails: {', '.join(bad)}")
    return data


def round_trip(mod: Module, v: list, data: DrinfeldData) -> dict:
    """Re-synthesize each phi series from P_i and compare with the module, both expansions."""
    out = {}
    for i, p in data.P.items():
        qi = mod.rd.q_i(i)
        plus = phi_eigenseries(mod, i, 1, v, data.T)
        minus = phi_eigenseries(mod, i, -1, v, data.T)
        out[i] = (synthesize_phi(p, qi, data.T, False) == plus,
                  synthesize_phi(p, qi, data.T, True) == minus)
    return out


@dataclass
class HighestWeightReport:
    vector: list
    window: int
    nodes: dict  # i -> {"deg_P": d, "nilpotency": k}

    def to_json(self) -> dict:
        return {
            "vector": [_fmt(x) for x in self.vector],
            "window": self.window,
            "nodes": {str(i): d for i, d in sorted(self.nodes.items())},
        }


def highest_weight_report(mod: Module, v: list, data: DrinfeldData, window: int = 1) -> HighestWeightReport:
    nodes = {}
    for i, p in data.P.items():
        xm = mod.matrix(Generator(XM, i, 0))
        nodes[i] = {"deg_P": len(p) - 1, "nilpotency": _nilpotency(xm, v, mod.dim + 1)}
    return HighestWeightReport(list(v), window, nodes)
