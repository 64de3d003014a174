"""Root data of sl^(M|N) for the distinguished Borel subalgebra.

Index conventions: ``k`` in ``1..M+N`` labels the basis vectors eps_k, and
``i`` in ``I = {1, ..., M+N-1}`` labels simple roots ``alpha_i = eps_i - eps_{i+1}``.
The bilinear form is ``(eps_i, eps_j) = l_i delta_ij`` with ``l_i = +1`` for
``i <= M`` and ``-1`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .scalars import QScalar

__all__ = [
    "RootDatum",
    "Weight",
    "RootDatumError",
    "delta_order_key",
    "s_order_key",
    "s_greater",
    "positive_roots",
    "odd_segment_set",
]


class RootDatumError(ValueError):
    pass


@dataclass(frozen=True)
class RootDatum:
    M: int
    N: int

    def __post_init__(self):
        if not (isinstance(self.M, int) and isinstance(self.N, int)) or self.M < 1 or self.N < 1:
            raise RootDatumError(f"M and N must be positive integers, got ({self.M}, {self.N})")
        if max(self.M, self.N) < 2:
            raise RootDatumError("at least one of M, N must exceed 1")

    @property
    def rank(self) -> int:
        """Number of simple roots, M + N - 1."""
        return self.M + self.N - 1

    @property
    def index_set(self) -> range:
        return range(1, self.M + self.N)

    def sign(self, k: int) -> int:
        """``l_k`` for ``k`` in 1..M+N."""
        if not 1 <= k <= self.M + self.N:
            raise RootDatumError(f"eps index {k} out of range")
        return 1 if k <= self.M else -1

    def check_index(self, i: int) -> None:
        if not 1 <= i < self.M + self.N:
            raise RootDatumError(f"index {i} not in I = {{1..{self.M + self.N - 1}}}")

    def q_exp(self, i: int) -> int:
        """Exponent of ``q_i = q^{(eps_i, eps_i)}``."""
        return self.sign(i)

    def q_i(self, i: int) -> QScalar:
        return QScalar.qpow(self.q_exp(i))

    def eps_pairing(self, k: int, m: int) -> int:
        return self.sign(k) if k == m else 0

    def cartan_pairing(self, i: int, j: int) -> int:
        """``a_ij = (eps_i - eps_{i+1}, eps_j - eps_{j+1})``."""
        self.check_index(i)
        self.check_index(j)
        e = self.eps_pairing
        return e(i, j) - e(i, j + 1) - e(i + 1, j) + e(i + 1, j + 1)

    a = cartan_pairing

    @cached_property
    def cartan_matrix(self) -> tuple:
        return tuple(tuple(self.cartan_pairing(i, j) for j in self.index_set) for i in self.index_set)

    def eps_alpha_pairing(self, k: int, i: int) -> int:
        """``(eps_k, alpha_i)``."""
        return self.eps_pairing(k, i) - self.eps_pairing(k, i + 1)

    def is_odd_index(self, i: int) -> bool:
        return i == self.M

    def to_json(self) -> dict:
        return {"M": self.M, "N": self.N}

    @classmethod
    def from_json(cls, data: dict) -> "RootDatum":
        return cls(int(data["M"]), int(data["N"]))


@dataclass(frozen=True)
class Weight:
    """Affine weight ``c_w0 * omega_0 + c_d * delta + sum_i c_i alpha_i``."""

    rd: RootDatum
    omega0: Fraction = Fraction(0)
    delta: Fraction = Fraction(0)
    alpha: tuple = field(default=())

    def __post_init__(self):
        alpha = tuple(Fraction(x) for x in self.alpha) or (Fraction(0),) * self.rd.rank
        if len(alpha) != self.rd.rank:
            raise RootDatumError("alpha coefficient vector has the wrong length")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "omega0", Fraction(self.omega0))
        object.__setattr__(self, "delta", Fraction(self.delta))

    @classmethod
    def simple_root(cls, rd: RootDatum, i: int) -> "Weight":
        rd.check_index(i)
        a = [0] * rd.rank
        a[i - 1] = 1
        return cls(rd, 0, 0, tuple(a))

    @classmethod
    def null_root(cls, rd: RootDatum) -> "Weight":
        return cls(rd, 0, 1)

    @classmethod
    def affine_fundamental(cls, rd: RootDatum) -> "Weight":
        return cls(rd, 1, 0)

    @classmethod
    def alpha0(cls, rd: RootDatum) -> "Weight":
        """``alpha_0 = delta - sum_i alpha_i``."""
        return cls(rd, 0, 1, tuple([-1] * rd.rank))

    def coefficients(self) -> tuple:
        return (self.omega0, self.delta) + self.alpha

    def _same(self, other: "Weight"):
        if not isinstance(other, Weight):
            raise TypeError("expected a Weight")
        if other.rd != self.rd:
            raise RootDatumError("weights belong to different root data")

    def __add__(self, other: "Weight") -> "Weight":
        self._same(other)
        return Weight(self.rd, self.omega0 + other.omega0, self.delta + other.delta,
                      tuple(x + y for x, y in zip(self.alpha, other.alpha)))

    def __neg__(self) -> "Weight":
        return Weight(self.rd, -self.omega0, -self.delta, tuple(-x for x in self.alpha))

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def __rmul__(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(self.rd, c * self.omega0, c * self.delta, tuple(c * x for x in self.alpha))

    def pairing(self, other: "Weight") -> Fraction:
        """Symmetric bilinear form on the basis {omega_0, delta, alpha_i}."""
        self._same(other)
        val = self.omega0 * other.delta + self.delta * other.omega0
        A = self.rd.cartan_matrix
        for i, x in enumerate(self.alpha):
            if x:
                for j, y in enumerate(other.alpha):
                    if y:
                        val += x * y * A[i][j]
        return val

    def in_positive_cone(self) -> bool:
        """Membership in Q^+ = sum Z_{>=0} alpha_i."""
        return (self.omega0 == 0 and self.delta == 0
                and all(x.denominator == 1 and x >= 0 for x in self.alpha))

    def eps_coordinates(self) -> tuple:
        """Coefficients on eps_1..eps_{M+N} of the finite part sum c_i alpha_i."""
        n = self.rd.M + self.rd.N
        out = [Fraction(0)] * n
        for i, c in enumerate(self.alpha, start=1):
            out[i - 1] += c
            out[i] -= c
        return tuple(out)

    def to_json(self) -> list:
        return [str(c) for c in self.coefficients()]


def delta_order_key(seg: tuple) -> tuple:
    """Key for the total order on Delta: beta_{i,j} < beta_{i',j'} iff (i,j) < (i',j') lexicographically."""
    return (seg[0], seg[1])


def positive_roots(rd: RootDatum) -> list:
    """Segments (i, j), i <= j, in increasing Delta order."""
    n = rd.rank
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def odd_segment_set(rd: RootDatum) -> list:
    """``S = {(a, b) | 1 <= a <= M <= b <= M+N-1, a < b}``, sorted increasingly in the S order."""
    M, n = rd.M, rd.rank
    segs = [(a, b) for a in range(1, M + 1) for b in range(M, n + 1) if a < b]
    return sorted(segs, key=s_order_key)


def s_order_key(seg: tuple) -> tuple:
    """Increasing key for the order on S: longer segments are larger; among equal
    lengths the one with smaller left end is larger."""
    a, b = seg
    return (b - a, -a)


def s_greater(x: tuple, y: tuple) -> bool:
    return s_order_key(x) > s_order_key(y)
