"""Exact scalar arithmetic and sparse matrices over F_p and Q.

Every rank/kernel/solve computation in the engine funnels through this
module.  Arithmetic is exact: canonical residues over a prime field,
``fractions.Fraction`` over the rationals.  Row reduction over F_p is
dispatched to a compiled kernel when available, with a pure-Python
fallback selected at import time.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from fractions import Fraction

try:
    from dgkoszul import _fpkernel as _kernel

    KERNEL = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from dgkoszul import _fpkernel_py as _kernel

    KERNEL = "python"

from dgkoszul import _fpkernel_py

# dense buffers above this many cells fall back to sparse elimination
DENSE_CELL_LIMIT = 4_000_000


class FieldMismatchError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FieldSpec:
    """Ground field: F_p for a prime p, or the rationals."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "prime":
            if p is None or not _is_prime(p):
                raise ValueError(f"not a prime: {p!r}")
            if p >= 2**31:
                raise ValueError("prime too large for the dense kernel")
        elif kind == "rationals":
            if p is not None:
                raise ValueError("rationals take no characteristic")
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals")

    # -- scalar arithmetic -------------------------------------------------

    @property
    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def from_int(self, n: int):
        return n % self.p if self.kind == "prime" else Fraction(n)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime" else a - b

    def neg(self, a):
        return (-a) % self.p if self.kind == "prime" else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "prime" else a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.kind == "prime" else 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return not a

    def is_canonical(self, a) -> bool:
        if self.kind == "prime":
            return isinstance(a, int) and 0 <= a < self.p
        return isinstance(a, Fraction)

    def serialize(self, a) -> str:
        if self.kind == "prime":
            return str(a)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, s: str):
        if self.kind == "prime":
            return int(s) % self.p
        return Fraction(s)

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"F_{self.p}" if self.kind == "prime" else "Q"


# -- vectors are sparse dicts index -> nonzero scalar ----------------------


def vec_add(field: FieldSpec, u: dict, v: dict) -> dict:
    out = dict(u)
    for k, x in v.items():
        s = field.add(out.get(k, field.zero), x)
        if field.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out

def vec_scale(field: FieldSpec, c, u: dict) -> dict:
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, x) for k, x in u.items()}

def vec_addmul(field: FieldSpec, u: dict, c, v: dict) -> dict:
    """u + c*v"""
    return vec_add(field, u, vec_scale(field, c, v))


class SparseMatrix:
    """Immutable-by-convention sparse matrix; no stored entry is zero."""

    __slots__ = ("rows", "cols", "field", "entries")

    def __init__(self, rows: int, cols: int, field: FieldSpec, entries: dict):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        for (r, c), v in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"index ({r},{c}) out of range")
            if field.is_zero(v):
                raise ValueError(f"stored zero at ({r},{c})")
            if not field.is_canonical(v):
                raise ValueError(f"non-canonical scalar at ({r},{c}): {v!r}")
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = entries

    @classmethod
    def zero(cls, rows, cols, field):
        return cls(rows, cols, field, {})

    @classmethod
    def identity(cls, n, field):
        return cls(n, n, field, {(i, i): field.one for i in range(n)})

    @classmethod
    def from_dense(cls, rows_list, field):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows_list):
            for j, v in enumerate(row):
                v = v if field.is_canonical(v) else field.from_int(v)
                if not field.is_zero(v):
                    ent[(i, j)] = v
        return cls(rows, cols, field, ent)

    @classmethod
    def from_columns(cls, columns, rows, field):
        """columns: list of sparse vectors (dict row -> scalar)."""
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if not field.is_zero(v):
                    ent[(i, j)] = v
        return cls(rows, len(columns), field, ent)

    def entry(self, r, c):
        return self.entries.get((r, c), self.field.zero)

    def column(self, c) -> dict:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, self.field,
            {(c, r): v for (r, c), v in self.entries.items()},
        )

    def matvec(self, vec: dict) -> dict:
        """Apply to a sparse column vector (dict col -> scalar)."""
        f = self.field
        out: dict = {}
        cols = None
        if len(vec) < self.cols:
            by_col: dict = {}
            for (r, c), v in self.entries.items():
                by_col.setdefault(c, []).append((r, v))
            cols = by_col
        for c, x in vec.items():
            items = cols.get(c, []) if cols is not None else [
                (r, v) for (r, cc), v in self.entries.items() if cc == c
            ]
            for r, v in items:
                s = f.add(out.get(r, f.zero), f.mul(v, x))
                if f.is_zero(s):
                    out.pop(r, None)
                else:
                    out[r] = s
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.field != other.field:
            raise FieldMismatchError("mixed fields")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        f = self.field
        out: dict = {}
        by_col: dict = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        for (k, j), w in other.entries.items():
            for r, v in by_col.get(k, ()):
                key = (r, j)
                s = f.add(out.get(key, f.zero), f.mul(v, w))
                if f.is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
        return SparseMatrix(self.rows, other.cols, f, out)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols} over {self.field}, {len(self.entries)} entries)"


@dataclass
class RrefResult:
    rank: int
    pivots: list
    kernel_basis: list  # sparse vectors of length cols
    image_basis: list   # sparse vectors of length rows (original pivot columns)
    rref_rows: list     # canonical RREF, list of sparse row dicts


def _rref_rows_generic(m: SparseMatrix) -> tuple[list, list]:
    """Sparse-dict Gaussian elimination; returns (rref rows, pivots)."""
    f = m.field
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == len(rows):
            break
        piv = -1
        for i in range(r, len(rows)):
            if not f.is_zero(rows[i].get(c, f.zero)):
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.inv(rows[r][c])
        if inv != f.one:
            rows[r] = {k: f.mul(inv, v) for k, v in rows[r].items()}
        for i in range(len(rows)):
            if i == r:
                continue
            factor = rows[i].get(c, f.zero)
            if not f.is_zero(factor):
                rows[i] = vec_addmul(f, rows[i], f.neg(factor), rows[r])
        pivots.append(c)
        r += 1
    return rows, pivots


def _rref_rows_dense_fp(m: SparseMatrix) -> tuple[list, list]:
    p = m.field.p
    buf = array("q", bytes(8 * m.rows * m.cols))
    for (r, c), v in m.entries.items():
        buf[r * m.cols + c] = v
    pivots = list(_kernel.rref_inplace(buf, m.rows, m.cols, p))
    rows = []
    for i in range(m.rows):
        row = {}
        base = i * m.cols
        for j in range(m.cols):
            v = buf[base + j]
            if v:
                row[j] = v
        rows.append(row)
    return rows, pivots


def rref(m: SparseMatrix) -> RrefResult:
    """Canonical reduced row echelon form with rank, kernel and image data.

    Pivoting: columns in order, lowest available row first; the result is
    the unique RREF, so all derived bases are deterministic.
    """
    f = m.field
    if (
        f.kind == "prime"
        and m.rows
        and m.cols
        and m.rows * m.cols <= DENSE_CELL_LIMIT
    ):
        rows, pivots = _rref_rows_dense_fp(m)
    else:
        rows, pivots = _rref_rows_generic(m)
    pivot_set = set(pivots)
    kernel = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = {free: f.one}
        for i, pc in enumerate(pivots):
            coef = rows[i].get(free, f.zero)
            if not f.is_zero(coef):
                v[pc] = f.neg(coef)
        kernel.append(v)
    image = [m.column(c) for c in pivots]
    return RrefResult(len(pivots), pivots, kernel, image, rows)


def solve(m: SparseMatrix, b: dict) -> dict | None:
    """One solution of m x = b (free variables zero), or None.

    b is a sparse vector of length m.rows.
    """
    f = m.field
    for r in b:
        if not 0 <= r < m.rows:
            raise ValueError("rhs index out of range")
    aug_entries = dict(m.entries)
    for r, v in b.items():
        if not f.is_zero(v):
            aug_entries[(r, m.cols)] = v
    aug = SparseMatrix(m.rows, m.cols + 1, f, aug_entries)
    if (
        f.kind == "prime"
        and aug.rows
        and aug.rows * aug.cols <= DENSE_CELL_LIMIT
    ):
        rows, pivots = _rref_rows_dense_fp(aug)
    else:
        rows, pivots = _rref_rows_generic(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = {}
    for i, pc in enumerate(pivots):
        v = rows[i].get(m.cols, f.zero)
        if not f.is_zero(v):
            x[pc] = v
    return x


def rref_fallback(m: SparseMatrix) -> RrefResult:
    """Force the pure-Python kernel; used by the benchmark."""
    global _kernel
    saved = _kernel
    try:
        _kernel = _fpkernel_py
        return rref(m)
    finally:
        _kernel = saved
