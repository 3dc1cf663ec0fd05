"""Exact dense matrices over the rationals.

Entries are ``gmpy2.mpq``.  Elimination works on sparse row dictionaries,
which matters because the block matrices built for the Gamma and Lambda
complexes are overwhelmingly zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def to_q(value) -> mpq:
    """Coerce ints, Fractions, mpq and ``"a/b"`` strings to ``mpq``."""
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def q_str(value) -> str:
    """Serialize a rational as ``"a/b"`` (or ``"a"`` for integers)."""
    value = mpq(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = [[to_q(v) for v in r] for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")

    @classmethod
    def _raw(cls, rows: list[list[mpq]], ncols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = ONE
        return m

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        m = cls.zeros(n, n)
        c = to_q(c)
        for i in range(n):
            m.rows[i][i] = c
        return m

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        m = cls.zeros(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    m.rows[i][j] = to_q(v)
        return m

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix | None"]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "Matrix":
        """Assemble from a grid of blocks; ``None`` stands for a zero block."""
        out = cls.zeros(sum(row_sizes), sum(col_sizes))
        r0 = 0
        for bi, brow in enumerate(blocks):
            c0 = 0
            for bj, b in enumerate(brow):
                if b is not None:
                    if (b.nrows, b.ncols) != (row_sizes[bi], col_sizes[bj]):
                        raise ValueError(
                            f"block ({bi},{bj}) has shape {b.shape}, "
                            f"expected {(row_sizes[bi], col_sizes[bj])}")
                    for i, row in enumerate(b.rows):
                        orow = out.rows[r0 + i]
                        for j, v in enumerate(row):
                            if v:
                                orow[c0 + j] = v
                c0 += col_sizes[bj]
            r0 += row_sizes[bi]
        return out

    @classmethod
    def diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = len(blocks)
        grid = [[blocks[i] if i == j else None for j in range(n)] for i in range(n)]
        return cls.block(grid, [b.nrows for b in blocks], [b.ncols for b in blocks])

    @classmethod
    def hstack(cls, mats: Sequence["Matrix"], nrows: int | None = None) -> "Matrix":
        if not mats:
            return cls.zeros(nrows or 0, 0)
        nr = mats[0].nrows
        rows = [[v for m in mats for v in m.rows[i]] for i in range(nr)]
        return cls._raw(rows, sum(m.ncols for m in mats))

    @classmethod
    def vstack(cls, mats: Sequence["Matrix"], ncols: int | None = None) -> "Matrix":
        if not mats:
            return cls.zeros(0, ncols or 0)
        nc = mats[0].ncols
        return cls._raw([list(r) for m in mats for r in m.rows], nc)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def copy(self) -> "Matrix":
        return Matrix._raw([list(r) for r in self.rows], self.ncols)

    def column(self, j: int) -> list[mpq]:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list[mpq]]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix._raw(rows, self.nrows)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw([r[c0:c1] for r in self.rows[r0:r1]], c1 - c0)

    def select_columns(self, cols: Iterable[int]) -> "Matrix":
        cols = list(cols)
        return Matrix._raw([[r[c] for c in cols] for r in self.rows], len(cols))

    def is_zero(self) -> bool:
        return not any(v for r in self.rows for v in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(q_str(v) for v in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                           self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                           self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = to_q(c)
        return Matrix._raw([[c * a for a in r] for r in self.rows], self.ncols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            nz = [[(j, v) for j, v in enumerate(r) if v] for r in other.rows]
            out = []
            for row in self.rows:
                acc = [ZERO] * other.ncols
                for k, a in enumerate(row):
                    if a:
                        for j, v in nz[k]:
                            acc[j] += a * v
                out.append(acc)
            return Matrix._raw(out, other.ncols)
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(r, vec) if a and b), ZERO) for r in self.rows]

    def apply(self, vec: Sequence) -> list[mpq]:
        return self @ vec

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.nrows)
        for _ in range(k):
            out = out @ self
        return out

    def to_strings(self) -> list[list[str]]:
        return [[q_str(v) for v in r] for r in self.rows]

    # elimination-backed queries

    def rank(self) -> int:
        return len(_reduce(self.rows, self.ncols))

    def kernel(self) -> "Matrix":
        """Columns form a basis of the null space."""
        return kernel(self)

    def image(self) -> "Matrix":
        """Columns form a basis of the column space."""
        return image(self)

    def det(self) -> mpq:
        return det(self)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        x = solve(self, Matrix.identity(self.nrows))
        if x is None:
            raise ZeroDivisionError("matrix is singular")
        return x


def _reduce(rows: Sequence[Sequence[mpq]], ncols: int) -> dict[int, dict[int, mpq]]:
    """Row-reduce to a pivot dictionary ``{pivot_col: row}``.

    Every stored row has a 1 in its pivot column and zeros in all other
    pivot columns.  Non-pivot columns may appear anywhere in a row.
    """
    piv: dict[int, dict[int, mpq]] = {}
    for r in rows:
        row = {j: v for j, v in enumerate(r) if v}
        if not row:
            continue
        for c in [c for c in row if c in piv]:
            v = row.get(c)
            if v:
                for j, w in piv[c].items():
                    nv = row.get(j, ZERO) - v * w
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        if not row:
            continue
        c = min(row)
        inv = ONE / row[c]
        row = {j: w * inv for j, w in row.items()}
        for prow in piv.values():
            v = prow.get(c)
            if v:
                for j, w in row.items():
                    nv = prow.get(j, ZERO) - v * w
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        piv[c] = row
    return piv


def rank(m: Matrix) -> int:
    return m.rank()


def kernel(m: Matrix) -> Matrix:
    piv = _reduce(m.rows, m.ncols)
    free = [j for j in range(m.ncols) if j not in piv]
    out = Matrix.zeros(m.ncols, len(free))
    for k, j in enumerate(free):
        out.rows[j][k] = ONE
        for c, row in piv.items():
            v = row.get(j)
            if v:
                out.rows[c][k] = -v
    return out


def image(m: Matrix) -> Matrix:
    piv = _reduce(m.T.rows, m.nrows)
    cols = []
    for c in sorted(piv):
        row = piv[c]
        cols.append([row.get(i, ZERO) for i in range(m.nrows)])
    return Matrix.from_columns(cols, m.nrows) if cols else Matrix.zeros(m.nrows, 0)


def rank_kernel_image(m: Matrix) -> tuple[int, Matrix, Matrix]:
    return m.rank(), kernel(m), image(m)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Return some X with ``a @ X == b`` (free variables set to 0), or None."""
    if a.nrows != b.nrows:
        raise ValueError("row count mismatch in solve")
    n = a.ncols
    aug = [ra + rb for ra, rb in zip(a.rows, b.rows)]
    piv = _reduce(aug, n + b.ncols)
    if any(c >= n for c in piv):
        return None
    x = Matrix.zeros(n, b.ncols)
    for c, row in piv.items():
        xr = x.rows[c]
        for j, v in row.items():
            if j >= n:
                xr[j - n] = v
    return x


def det(m: Matrix) -> mpq:
    if m.nrows != m.ncols:
        raise ValueError("det of a non-square matrix")
    a = [list(r) for r in m.rows]
    n = m.nrows
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        pv = a[c][c]
        result *= pv
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f = f / pv
                ri, rc = a[i], a[c]
                for j in range(c, n):
                    if rc[j]:
                        ri[j] -= f * rc[j]
    return result


# subspaces are stored as column-basis matrices


def span(m: Matrix) -> Matrix:
    return image(m)


def subspace_sum(u: Matrix, v: Matrix) -> Matrix:
    return image(Matrix.hstack([u, v]))


def intersect(u: Matrix, v: Matrix) -> Matrix:
    if u.ncols == 0 or v.ncols == 0:
        return Matrix.zeros(u.nrows, 0)
    k = kernel(Matrix.hstack([u, -v]))
    return image(u @ k.submatrix(0, u.ncols, 0, k.ncols))


def contains(u: Matrix, v: Matrix) -> bool:
    """True when the column span of ``v`` lies in that of ``u``."""
    if v.ncols == 0:
        return True
    return Matrix.hstack([u, v]).rank() == u.rank()


def same_span(u: Matrix, v: Matrix) -> bool:
    r = Matrix.hstack([u, v]).rank()
    return r == u.rank() == v.rank()


def complement(sub: Matrix, ambient_dim: int) -> Matrix:
    """Standard basis vectors completing ``sub`` to a basis of the ambient space."""
    piv = _reduce(sub.T.rows, ambient_dim)
    cols = [j for j in range(ambient_dim) if j not in piv]
    out = Matrix.zeros(ambient_dim, len(cols))
    for k, j in enumerate(cols):
        out.rows[j][k] = ONE
    return out


def quotient_projection(sub: Matrix, ambient_dim: int) -> tuple[Matrix, Matrix]:
    """Return ``(lift, proj)`` for the quotient of the ambient space by ``sub``.

    ``lift`` has complement basis vectors as columns and ``proj`` maps the
    ambient space onto complement coordinates, killing ``sub``.
    """
    comp = complement(sub, ambient_dim)
    full = Matrix.hstack([sub, comp]) if sub.ncols else comp
    inv = full.inverse() if ambient_dim else Matrix.zeros(0, 0)
    proj = inv.submatrix(sub.ncols, ambient_dim, 0, ambient_dim)
    return comp, proj


def annihilator(sub: Matrix, ambient_dim: int) -> Matrix:
    """Rows span the linear forms vanishing on ``sub``."""
    if sub.ncols == 0:
        return Matrix.identity(ambient_dim)
    return kernel(sub.T).T
