"""Exact linear algebra over Q(q), plus a modular shadow over GF(p).

Matrices are lists of lists of :class:`QScalar`.  Sparse row reducers keep
rows as ``{column: value}`` dicts and record which input rows each echelon
row came from, so a membership test also yields a certificate.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, QScalar, _coerce

__all__ = [
    "zeros", "identity", "matmul", "matadd", "matsub", "matscale", "matpow",
    "matvec", "is_zero_matrix", "rref", "rank", "kernel", "solve",
    "ModReducer", "ExactReducer", "PRIME", "SMat",
]

PRIME = (1 << 61) - 1


def zeros(r: int, c: int) -> list:
    return [[ZERO] * c for _ in range(r)]


def identity(n: int) -> list:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def matmul(A: list, B: list) -> list:
    if not A:
        return []
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            for j in range(m):
                b = Bt[j]
                if b:
                    row[j] = row[j] + a * b
    return out


def matadd(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A, c):
    c = _coerce(c)
    return [[c * x if x else ZERO for x in row] for row in A]


def matpow(A, k: int):
    out = identity(len(A))
    base = A
    while k:
        if k & 1:
            out = matmul(out, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return out


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), ZERO) for row in A]


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def rref(A: list):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = [list(row) for row in A]
    rows = len(R)
    cols = len(R[0]) if R else 0
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = ONE / R[r][c]
        R[r] = [x * inv if x else ZERO for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y if y else x for x, y in zip(R[i], R[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return R, piv


def rank(A: list) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def kernel(A: list, ncols: int | None = None) -> list:
    """Basis of the right null space ``{x : A x = 0}``, as column vectors."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        basis = []
        for j in range(ncols):
            v = [ZERO] * ncols
            v[j] = ONE
            basis.append(v)
        return basis
    R, piv = rref(A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, c in enumerate(piv):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def solve(A: list, b: list):
    """One solution of ``A x = b`` or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    if ncols in piv:
        return None
    x = [ZERO] * ncols
    for r, c in enumerate(piv):
        x[c] = R[r][ncols]
    return x


class ModReducer:
    """Incremental echelon basis over GF(p) with provenance tracking."""

    def __init__(self, p: int = PRIME, track: bool = True):
        self.p = p
        self.pivots: dict = {}  # leading column -> (row, provenance)
        self.track = track

    def _reduce(self, row: dict, prov: dict):
        p = self.p
        row = dict(row)
        while row:
            col = min(row)
            hit = self.pivots.get(col)
            if hit is None:
                return row, prov, col
            prow, pprov = hit
            f = row[col]
            for c, v in prow.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            if self.track:
                for k, v in pprov.items():
                    nv = (prov.get(k, 0) - f * v) % p
                    if nv:
                        prov[k] = nv
                    else:
                        prov.pop(k, None)
        return row, prov, None

    def add(self, row: dict, tag) -> bool:
        """Add a row; returns True if it enlarged the span."""
        row = {c: v % self.p for c, v in row.items() if v % self.p}
        prov = {tag: 1} if self.track else {}
        row, prov, col = self._reduce(row, prov)
        if col is None:
            return False
        inv = pow(row[col], self.p - 2, self.p)
        row = {c: v * inv % self.p for c, v in row.items()}
        if self.track:
            prov = {k: v * inv % self.p for k, v in prov.items()}
        self.pivots[col] = (row, prov)
        return True

    def express(self, target: dict):
        """Return provenance coefficients c with sum c_tag row_tag = target, or None."""
        row = {c: v % self.p for c, v in target.items() if v % self.p}
        row, prov, col = self._reduce(row, {})
        if row:
            return None
        # target - sum(...) = 0 where the reduction subtracted f * pivots
        return {k: (-v) % self.p for k, v in prov.items()}

    @property
    def rank(self) -> int:
        return len(self.pivots)


class ExactReducer:
    """Incremental echelon basis over Q(q) with provenance tracking."""

    def __init__(self):
        self.pivots: dict = {}

    def _reduce(self, row: dict, prov: dict):
        row = dict(row)
        while row:
            col = min(row)
            hit = self.pivots.get(col)
            if hit is None:
                return row, prov, col
            prow, pprov = hit
            f = row[col]
            for c, v in prow.items():
                nv = row.get(c, ZERO) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            for k, v in pprov.items():
                nv = prov.get(k, ZERO) - f * v
                if nv:
                    prov[k] = nv
                else:
                    prov.pop(k, None)
        return row, prov, None

    def add(self, row: dict, tag) -> bool:
        row = {c: v for c, v in row.items() if v}
        row, prov, col = self._reduce(row, {tag: ONE})
        if col is None:
            return False
        inv = ONE / row[col]
        row = {c: v * inv for c, v in row.items()}
        prov = {k: v * inv for k, v in prov.items()}
        self.pivots[col] = (row, prov)
        return True

    def express(self, target: dict):
        row = {c: v for c, v in target.items() if v}
        row, prov, col = self._reduce(row, {})
        if row:
            return None
        return {k: -v for k, v in prov.items()}

    @property
    def rank(self) -> int:
        return len(self.pivots)


class SMat:
    """Sparse square-or-rectangular matrix over Q(q), stored as ``{row: {col: value}}``.

    Instances are treated as immutable once built.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int | None = None, rows: dict | None = None):
        self.nrows = nrows
        self.ncols = nrows if ncols is None else ncols
        self.rows = {}
        if rows:
            for r, row in rows.items():
                clean = {c: _coerce(v) for c, v in row.items() if v}
                if clean:
                    self.rows[r] = clean

    @classmethod
    def _wrap(cls, nrows, ncols, rows) -> "SMat":
        m = cls.__new__(cls)
        m.nrows, m.ncols, m.rows = nrows, ncols, rows
        return m

    @classmethod
    def identity(cls, n: int) -> "SMat":
        return cls._wrap(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def diag(cls, values) -> "SMat":
        values = [_coerce(v) for v in values]
        n = len(values)
        return cls._wrap(n, n, {i: {i: v} for i, v in enumerate(values) if v})

    @classmethod
    def unit(cls, n: int, r: int, c: int, value=ONE) -> "SMat":
        return cls(n, n, {r: {c: value}})

    @classmethod
    def from_dense(cls, A: list) -> "SMat":
        nr = len(A)
        nc = len(A[0]) if A else 0
        return cls(nr, nc, {i: {j: x for j, x in enumerate(row) if x} for i, row in enumerate(A)})

    def to_dense(self) -> list:
        out = zeros(self.nrows, self.ncols)
        for r, row in self.rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def get(self, r: int, c: int) -> QScalar:
        return self.rows.get(r, {}).get(c, ZERO)

    def is_zero(self) -> bool:
        return not self.rows

    def is_diagonal(self) -> bool:
        return all(set(row) <= {r} for r, row in self.rows.items())

    def diagonal(self) -> list:
        return [self.get(i, i) for i in range(min(self.nrows, self.ncols))]

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def _same_shape(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}")

    def __add__(self, other: "SMat") -> "SMat":
        self._same_shape(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, orow in other.rows.items():
            row = rows.setdefault(r, {})
            for c, v in orow.items():
                nv = row.get(c, ZERO) + v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            if not row:
                del rows[r]
        return SMat._wrap(self.nrows, self.ncols, rows)

    def __neg__(self) -> "SMat":
        return SMat._wrap(self.nrows, self.ncols, {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()})

    def __sub__(self, other: "SMat") -> "SMat":
        return self + (-other)

    def scale(self, c) -> "SMat":
        c = _coerce(c)
        if not c:
            return SMat._wrap(self.nrows, self.ncols, {})
        return SMat._wrap(self.nrows, self.ncols, {r: {k: c * v for k, v in row.items()} for r, row in self.rows.items()})

    def __matmul__(self, other: "SMat") -> "SMat":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        rows = {}
        orows = other.rows
        for r, row in self.rows.items():
            acc: dict = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for c, b in brow.items():
                    acc[c] = acc.get(c, ZERO) + a * b
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                rows[r] = acc
        return SMat._wrap(self.nrows, other.ncols, rows)

    def __pow__(self, k: int) -> "SMat":
        if k < 0:
            raise ValueError("negative matrix power")
        out = SMat.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def apply(self, v: list) -> list:
        out = [ZERO] * self.nrows
        for r, row in self.rows.items():
            acc = ZERO
            for c, a in row.items():
                x = v[c]
                if x:
                    acc = acc + a * x
            out[r] = acc
        return out

    def __eq__(self, other):
        if not isinstance(other, SMat):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(sorted((r, tuple(sorted(row.items(), key=lambda t: t[0]))) for r, row in self.rows.items()))))

    def __repr__(self):
        return f"SMat({self.nrows}x{self.ncols}, nnz={self.nnz()})"
