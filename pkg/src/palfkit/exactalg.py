"""Exact scalars, sparse matrices over a field, and integer Smith normal form.

Nothing here touches floating point.  The ground field is either the
rationals (``Fraction``) or a prime field, whose elements are ``Mod``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Mod:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldError("mixing residues mod %d and mod %d" % (self.p, other.p))
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero mod %d" % self.p)
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return Mod(other, self.p) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def signed(self) -> int:
        """Representative in (-p/2, p/2]."""
        return self.v - self.p if self.v > self.p // 2 else self.v

    def __repr__(self):
        return "Mod(%d, %d)" % (self.v, self.p)

    def __str__(self):
        return str(self.signed())


@dataclass(frozen=True)
class Field:
    """Ground field descriptor: ``Field()`` is Q, ``Field(7)`` is F_7."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not _is_prime(self.prime):
            raise FieldError("%r is not prime" % self.prime)

    @classmethod
    def parse(cls, text: str) -> "Field":
        t = text.strip().lower()
        if t in ("q", "qq", "rational", "rationals"):
            return cls()
        if t.startswith("fp:"):
            try:
                p = int(t[3:])
            except ValueError:
                raise FieldError("bad prime in field spec %r" % text) from None
            return cls(p)
        raise FieldError("unknown field spec %r (use q or fp:P)" % text)

    @property
    def name(self) -> str:
        return "q" if self.prime is None else "fp:%d" % self.prime

    def __call__(self, x):
        if self.prime is None:
            if isinstance(x, Mod):
                raise FieldError("cannot lift a residue to Q")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.prime:
                raise FieldError("residue mod %d in F_%d" % (x.p, self.prime))
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.prime == 0:
                raise FieldError("%s is not defined mod %d" % (x, self.prime))
            return Mod(x.numerator, self.prime) / x.denominator
        return Mod(x, self.prime)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_text(self, x) -> str:
        if isinstance(x, Mod):
            return str(x.signed())
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


QQ = Field()


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse matrix; ``entries`` never stores a zero."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)
    field: Field = QQ

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError("entry (%d, %d) outside %dx%d" % (i, j, self.rows, self.cols))
            v = self.field(v)
            if v:
                clean[i, j] = v
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_dense(cls, rows, fld: Field = QQ, ncols: int | None = None):
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else (ncols or 0)
        ent = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(m, n, ent, fld)

    @classmethod
    def identity(cls, n, fld: Field = QQ):
        return cls(n, n, {(i, i): 1 for i in range(n)}, fld)

    def __getitem__(self, ij):
        return self.entries.get(ij, self.field.zero)

    def to_dense(self):
        out = [[self.field.zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}, self.field)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %dx%d @ %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), self.field.zero) + a * b
        return ExactMatrix(self.rows, other.cols, acc, self.field)

    def apply(self, vec):
        """Multiply by a column vector given as a list."""
        out = [self.field.zero] * self.rows
        for (i, j), v in self.entries.items():
            out[i] = out[i] + v * vec[j]
        return out

    def is_zero(self) -> bool:
        return not self.entries


def rref(m: ExactMatrix):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are sparse dicts col -> value of
    the nonzero reduced rows and ``pivots`` their pivot columns.  Pivot choice
    prefers the sparsest available row, which keeps fill-in (and for Q the
    coefficient growth) small on the matrices this package builds.
    """
    work = {}
    for (i, j), v in m.entries.items():
        work.setdefault(i, {})[j] = v
    remaining = set(work)
    rows, pivots = [], []
    for col in range(m.cols):
        cands = [r for r in remaining if col in work[r]]
        if not cands:
            continue
        piv = min(cands, key=lambda r: (len(work[r]), r))
        remaining.discard(piv)
        prow = work[piv]
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        for r in cands:
            if r == piv:
                continue
            row = work[r]
            f = row[col]
            for c, v in prow.items():
                nv = row.get(c, m.field.zero) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        for k, row in enumerate(rows):
            f = row.get(col)
            if f:
                for c, v in prow.items():
                    nv = row.get(c, m.field.zero) - f * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        rows.append(prow)
        pivots.append(col)
    return rows, pivots


def rank(m: ExactMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: ExactMatrix) -> list[list]:
    """Basis of the right kernel, one dense vector per free column."""
    rows, pivots = rref(m)
    pset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pset:
            continue
        v = [m.field.zero] * m.cols
        v[free] = m.field.one
        for row, p in zip(rows, pivots):
            c = row.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def solve_in_span(vectors: list[list], target: list, fld: Field = QQ):
    """Coefficients expressing ``target`` in the span of ``vectors``, or None."""
    n = len(target)
    if not vectors:
        return [] if all(not x for x in target) else None
    # columns are the vectors, augmented by target
    ent = {}
    for j, vec in enumerate(vectors):
        for i, x in enumerate(vec):
            if x:
                ent[i, j] = x
    for i, x in enumerate(target):
        if x:
            ent[i, len(vectors)] = x
    rows, pivots = rref(ExactMatrix(n, len(vectors) + 1, ent, fld))
    if len(vectors) in pivots:
        return None
    coeffs = [fld.zero] * len(vectors)
    for row, p in zip(rows, pivots):
        coeffs[p] = row.get(len(vectors), fld.zero)
    return coeffs


# -- integer matrices ---------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple = ()

    def __post_init__(self):
        data = tuple(tuple(int(x) for x in r) for r in self.data)
        if len(data) != self.rows or any(len(r) != self.cols for r in data):
            raise ValueError("IntMatrix data does not match shape %dx%d" % (self.rows, self.cols))
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None):
        rows = [list(r) for r in rows]
        n = len(rows[0]) if rows else (ncols or 0)
        return cls(len(rows), n, rows)

    @classmethod
    def zeros(cls, m, n):
        return cls(m, n, [[0] * n for _ in range(m)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def tolist(self):
        return [list(r) for r in self.data]

    def transpose(self):
        return IntMatrix(self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        oc = other.transpose().data
        return IntMatrix(self.rows, other.cols,
                         [[sum(a * b for a, b in zip(r, c)) for c in oc] for r in self.data])


def int_det(rows) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """``left @ m @ right`` is diagonal with entries ``diagonal`` (then zeros)."""

    diagonal: tuple
    left: IntMatrix
    right: IntMatrix

    def cokernel(self, nrows: int) -> "AbelianGroup":
        torsion = tuple(d for d in self.diagonal if d > 1)
        return AbelianGroup(free_rank=nrows - len(self.diagonal), torsion=torsion)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z^free_rank + sum Z/t."""

    free_rank: int
    torsion: tuple = ()

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else "Z^%d" % self.free_rank)
        parts += ["Z/%d" % t for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms.

    The nonzero diagonal entries are positive and each divides the next.
    """
    A = m.tolist()
    nr, nc = m.rows, m.cols
    L = [[int(i == j) for j in range(nr)] for i in range(nr)]
    R = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        L[dst] = [a + f * b for a, b in zip(L[dst], L[src])]

    def add_col(src, dst, f):
        for row in A:
            row[dst] += f * row[src]
        for row in R:
            row[dst] += f * row[src]

    diag = []
    t = 0
    while t < min(nr, nc):
        nz = [(abs(A[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, nr):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, nc):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
        diag.append(A[t][t])
        t += 1
    return SmithForm(tuple(diag), IntMatrix(nr, nr, L), IntMatrix(nc, nc, R))


def cokernel(m: IntMatrix) -> AbelianGroup:
    """Z^rows / (column span of m)."""
    return smith_normal_form(m).cokernel(m.rows)


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
