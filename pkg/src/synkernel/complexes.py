"""Bounded cochain complexes of finite-dimensional Q-vector spaces.

Conventions used everywhere in the package:

* ``Cone(u: X -> Y)^n = Y^n (+) X^{n+1}`` with ``d(y, x) = (d y + u x, -d x)``.
* ``C[k]^n = C^{n+k}`` with differential ``(-1)^k d``.
* Total complexes twist horizontal maps by ``(-1)^row``.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .linalg import (
    ONE,
    Matrix,
    complement,
    image,
    intersect,
    kernel,
    quotient_projection,
    solve,
    subspace_sum,
)

# sign on the -d_X block of a cone; flipped only by the mutation tripwire
_CONE_SIGN = -1


class ComplexError(ValueError):
    pass


@contextlib.contextmanager
def flipped_cone_sign():
    """Temporarily break the cone convention (used to prove tests can fail)."""
    global _CONE_SIGN
    old = _CONE_SIGN
    _CONE_SIGN = -old
    try:
        yield
    finally:
        _CONE_SIGN = old


class VectorComplex:
    """Degrees ``lo..hi`` with ``diffs[i]: C^{lo+i} -> C^{lo+i+1}``."""

    __slots__ = ("lo", "dims", "diffs")

    def __init__(self, lo: int, dims: Iterable[int], diffs: Iterable[Matrix] = (), check: bool = True):
        self.lo = lo
        self.dims = tuple(dims)
        diffs = list(diffs)
        if not diffs and len(self.dims) > 1:
            diffs = [Matrix.zeros(self.dims[i + 1], self.dims[i]) for i in range(len(self.dims) - 1)]
        if len(diffs) != max(len(self.dims) - 1, 0):
            raise ComplexError("need exactly one differential between consecutive degrees")
        for i, d in enumerate(diffs):
            if d.shape != (self.dims[i + 1], self.dims[i]):
                raise ComplexError(f"differential in degree {lo + i} has shape {d.shape}, "
                                   f"expected {(self.dims[i + 1], self.dims[i])}")
        self.diffs = tuple(diffs)
        if check:
            self.check()

    @classmethod
    def from_maps(cls, dims: Mapping[int, int], diffs: Mapping[int, Matrix], check: bool = True) -> "VectorComplex":
        if not dims:
            return cls(0, ())
        lo, hi = min(dims), max(dims)
        ds = [dims.get(n, 0) for n in range(lo, hi + 1)]
        maps = []
        for n in range(lo, hi):
            m = diffs.get(n)
            maps.append(m if m is not None else Matrix.zeros(ds[n - lo + 1], ds[n - lo]))
        return cls(lo, ds, maps, check=check)

    @classmethod
    def single(cls, dim: int, degree: int = 0) -> "VectorComplex":
        return cls(degree, (dim,))

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.dims[n - self.lo]
        return 0

    def d(self, n: int) -> Matrix:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return Matrix.zeros(self.dim(n + 1), self.dim(n))

    def check(self) -> None:
        for n in range(self.lo, self.hi - 1):
            if not (self.d(n + 1) @ self.d(n)).is_zero():
                raise ComplexError(f"d^{n + 1} d^{n} != 0")

    def is_complex(self) -> bool:
        try:
            self.check()
        except ComplexError:
            return False
        return True

    def total_dim(self) -> int:
        return sum(self.dims)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees())

    def cohomology(self, n: int) -> "Cohomology":
        return cohomology(self, n)

    def betti(self, degrees: Iterable[int] | None = None) -> list[int]:
        degs = self.degrees() if degrees is None else degrees
        return [cohomology_dim(self, n) for n in degs]

    def betti_dict(self) -> dict[int, int]:
        return {n: cohomology_dim(self, n) for n in self.degrees()}

    def is_acyclic(self) -> bool:
        return all(b == 0 for b in self.betti())

    def same_as(self, other: "VectorComplex") -> bool:
        degs = set(self.degrees()) | set(other.degrees())
        if not degs:
            return True
        return all(self.dim(n) == other.dim(n) for n in degs) and all(
            self.d(n) == other.d(n) for n in degs)

    def __repr__(self) -> str:
        return f"VectorComplex(lo={self.lo}, dims={list(self.dims)})"


@dataclass
class ChainMap:
    src: VectorComplex
    tgt: VectorComplex
    maps: dict = field(default_factory=dict)
    degree: int = 0

    def __post_init__(self):
        for n in list(self.maps):
            m = self.maps[n]
            want = (self.tgt.dim(n + self.degree), self.src.dim(n))
            if m.shape != want:
                raise ComplexError(f"chain map component in degree {n} has shape {m.shape}, expected {want}")

    def at(self, n: int) -> Matrix:
        m = self.maps.get(n)
        if m is None:
            return Matrix.zeros(self.tgt.dim(n + self.degree), self.src.dim(n))
        return m

    def degrees(self) -> range:
        lo = min(self.src.lo, self.tgt.lo - self.degree)
        hi = max(self.src.hi, self.tgt.hi - self.degree)
        return range(lo - 1, hi + 2)

    def is_chain_map(self) -> bool:
        sign = (-1) ** self.degree
        for n in self.degrees():
            lhs = self.tgt.d(n + self.degree) @ self.at(n)
            rhs = self.at(n + 1) @ self.src.d(n)
            if lhs != rhs.scale(sign):
                return False
        return True

    def check(self) -> None:
        if not self.is_chain_map():
            raise ComplexError("map does not commute with differentials")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        maps = {n: self.at(n + other.degree) @ other.at(n) for n in other.src.degrees()}
        return ChainMap(other.src, self.tgt, maps, self.degree + other.degree)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.src, self.tgt, {n: self.at(n) + other.at(n) for n in self.src.degrees()}, self.degree)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.src, self.tgt, {n: m.scale(c) for n, m in self.maps.items()}, self.degree)

    def induced(self, n: int) -> Matrix:
        """Matrix of ``H^n(src) -> H^{n+deg}(tgt)`` in representative bases."""
        hs = cohomology(self.src, n)
        ht = cohomology(self.tgt, n + self.degree)
        if hs.dim == 0 or ht.dim == 0:
            return Matrix.zeros(ht.dim, hs.dim)
        return ht.classify(self.at(n) @ hs.reps)

    def is_quasi_isomorphism(self) -> bool:
        for n in self.degrees():
            m = self.induced(n)
            if m.nrows != m.ncols or m.rank() != m.nrows:
                return False
        return True


def identity_map(c: VectorComplex) -> ChainMap:
    return ChainMap(c, c, {n: Matrix.identity(c.dim(n)) for n in c.degrees()})


def zero_map(src: VectorComplex, tgt: VectorComplex) -> ChainMap:
    return ChainMap(src, tgt, {})


@dataclass
class Cohomology:
    degree: int
    cocycles: Matrix
    coboundaries: Matrix
    reps: Matrix

    @property
    def dim(self) -> int:
        return self.reps.ncols

    def classify(self, vectors: Matrix) -> Matrix:
        """Coordinates of cocycle classes (columns) in the ``reps`` basis."""
        basis = Matrix.hstack([self.coboundaries, self.reps])
        x = solve(basis, vectors)
        if x is None:
            raise ComplexError("vector is not a cocycle")
        nb = self.coboundaries.ncols
        return x.submatrix(nb, nb + self.dim, 0, x.ncols)

    def is_coboundary(self, vec) -> bool:
        v = Matrix.from_columns([list(vec)], len(vec))
        return self.classify(v).is_zero()


def cohomology(c: VectorComplex, n: int) -> Cohomology:
    dim = c.dim(n)
    z = kernel(c.d(n)) if dim else Matrix.zeros(0, 0)
    b = image(c.d(n - 1)) if dim else Matrix.zeros(0, 0)
    if dim == 0:
        return Cohomology(n, z, b, Matrix.zeros(0, 0))
    # cocycle columns extending the coboundary basis
    comp_in_z = complement(_coords_in(z, b), z.ncols)
    reps = z @ comp_in_z
    return Cohomology(n, z, b, reps)


def _coords_in(basis: Matrix, vectors: Matrix) -> Matrix:
    x = solve(basis, vectors)
    if x is None:
        raise ComplexError("subspace not contained in basis span")
    return x


def cohomology_dim(c: VectorComplex, n: int) -> int:
    dim = c.dim(n)
    if dim == 0:
        return 0
    return dim - c.d(n).rank() - c.d(n - 1).rank()


def direct_sum(*cs: VectorComplex) -> VectorComplex:
    cs = [c for c in cs if c.dims]
    if not cs:
        return VectorComplex(0, ())
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    dims = {n: sum(c.dim(n) for c in cs) for n in range(lo, hi + 1)}
    diffs = {n: Matrix.diag([c.d(n) for c in cs]) for n in range(lo, hi)}
    return VectorComplex.from_maps(dims, diffs, check=False)


def direct_sum_map(*us: ChainMap) -> ChainMap:
    src = direct_sum(*[u.src for u in us])
    tgt = direct_sum(*[u.tgt for u in us])
    return ChainMap(src, tgt, {n: Matrix.diag([u.at(n) for u in us]) for n in src.degrees()})


def shift(c: VectorComplex, k: int) -> VectorComplex:
    if not c.dims:
        return c
    sign = (-1) ** k
    return VectorComplex(c.lo - k, c.dims, [d.scale(sign) for d in c.diffs], check=False)


def shift_map(u: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(u.src, k), shift(u.tgt, k), {n - k: m for n, m in u.maps.items()}, u.degree)


def cone(u: ChainMap, check: bool = True) -> VectorComplex:
    """``Cone(u)^n = Y^n (+) X^{n+1}``, ``d(y, x) = (d_Y y + u(x), -d_X x)``."""
    if u.degree != 0:
        raise ComplexError("cone of a map of nonzero degree")
    if check and not u.is_chain_map():
        raise ComplexError("cone of a map that is not a chain map")
    x, y = u.src, u.tgt
    degs = set(y.degrees()) | {n - 1 for n in x.degrees()}
    if not degs:
        return VectorComplex(0, ())
    lo, hi = min(degs), max(degs)
    dims = {n: y.dim(n) + x.dim(n + 1) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        diffs[n] = Matrix.block(
            [[y.d(n), u.at(n + 1)], [None, x.d(n + 1).scale(_CONE_SIGN)]],
            [y.dim(n + 1), x.dim(n + 2)], [y.dim(n), x.dim(n + 1)])
    out = VectorComplex.from_maps(dims, diffs, check=False)
    out.check()
    return out


def cone_inclusion(u: ChainMap, c: VectorComplex | None = None) -> ChainMap:
    """``Y -> Cone(u)``, ``y -> (y, 0)``."""
    c = c or cone(u)
    y, x = u.tgt, u.src
    maps = {n: Matrix.vstack([Matrix.identity(y.dim(n)), Matrix.zeros(x.dim(n + 1), y.dim(n))])
            for n in y.degrees()}
    return ChainMap(y, c, maps)


def cone_projection(u: ChainMap, c: VectorComplex | None = None) -> ChainMap:
    """``Cone(u) -> X[1]``, ``(y, x) -> x``."""
    c = c or cone(u)
    y, x = u.tgt, u.src
    x1 = shift(x, 1)
    maps = {n: Matrix.hstack([Matrix.zeros(x.dim(n + 1), y.dim(n)), Matrix.identity(x.dim(n + 1))])
            for n in c.degrees()}
    return ChainMap(c, x1, maps)


@dataclass
class DoubleComplex:
    """Objects at (col, row) with horizontal (col+1) and vertical (row+1) maps.

    Input squares are expected to commute; totalization applies the
    ``(-1)^row`` twist to horizontal maps.
    """

    dims: dict
    horizontal: dict = field(default_factory=dict)
    vertical: dict = field(default_factory=dict)

    def dim(self, a: int, b: int) -> int:
        return self.dims.get((a, b), 0)

    def h(self, a: int, b: int) -> Matrix:
        m = self.horizontal.get((a, b))
        return m if m is not None else Matrix.zeros(self.dim(a + 1, b), self.dim(a, b))

    def v(self, a: int, b: int) -> Matrix:
        m = self.vertical.get((a, b))
        return m if m is not None else Matrix.zeros(self.dim(a, b + 1), self.dim(a, b))


def total_complex(dc: DoubleComplex) -> tuple[VectorComplex, dict]:
    """Return the total complex and the offsets of each (col, row) summand."""
    cells = [k for k, v in dc.dims.items() if v]
    if not cells:
        return VectorComplex(0, ()), {}
    for (a, b) in cells:
        sq = dc.v(a + 1, b) @ dc.h(a, b) - dc.h(a, b + 1) @ dc.v(a, b)
        if not sq.is_zero():
            raise ComplexError(f"square at {(a, b)} does not commute")
        if not (dc.h(a + 1, b) @ dc.h(a, b)).is_zero() or not (dc.v(a, b + 1) @ dc.v(a, b)).is_zero():
            raise ComplexError(f"rows or columns fail d^2 = 0 at {(a, b)}")
    lo = min(a + b for a, b in cells)
    hi = max(a + b for a, b in cells)
    layout: dict[int, list] = {}
    offsets = {}
    for n in range(lo, hi + 1):
        parts = sorted((a, b) for (a, b) in cells if a + b == n)
        layout[n] = parts
        off = 0
        for cell in parts:
            offsets[cell] = off
            off += dc.dim(*cell)
    dims = {n: sum(dc.dim(*c) for c in layout[n]) for n in layout}
    diffs = {}
    for n in range(lo, hi):
        m = Matrix.zeros(dims[n + 1], dims[n])
        for (a, b) in layout[n]:
            c0 = offsets[(a, b)]
            for tgt, blk in (((a + 1, b), dc.h(a, b).scale((-1) ** b)), ((a, b + 1), dc.v(a, b))):
                if tgt in offsets and dc.dim(*tgt):
                    r0 = offsets[tgt]
                    for i, row in enumerate(blk.rows):
                        for j, val in enumerate(row):
                            if val:
                                m.rows[r0 + i][c0 + j] = val
        diffs[n] = m
    tot = VectorComplex.from_maps(dims, diffs, check=False)
    try:
        tot.check()
    except ComplexError as exc:
        raise ComplexError(f"sign check failed in totalization: {exc}") from None
    return tot, offsets


def subcomplex(c: VectorComplex, bases: Mapping[int, Matrix]) -> tuple[VectorComplex, ChainMap]:
    """The subcomplex spanned degreewise by ``bases`` (columns, independent)."""
    dims = {n: bases[n].ncols if n in bases else 0 for n in c.degrees()}
    diffs = {}
    for n in c.degrees():
        if n + 1 > c.hi:
            continue
        src = bases.get(n, Matrix.zeros(c.dim(n), 0))
        tgt = bases.get(n + 1, Matrix.zeros(c.dim(n + 1), 0))
        img = c.d(n) @ src
        x = solve(tgt, img) if tgt.ncols or not img.is_zero() else Matrix.zeros(0, src.ncols)
        if x is None:
            raise ComplexError(f"subspaces are not closed under d in degree {n}")
        diffs[n] = x
    sub = VectorComplex.from_maps(dims, diffs)
    inc = ChainMap(sub, c, {n: bases.get(n, Matrix.zeros(c.dim(n), 0)) for n in c.degrees()})
    return sub, inc


def quotient_complex(c: VectorComplex, bases: Mapping[int, Matrix]) -> tuple[VectorComplex, ChainMap, dict]:
    """Degreewise quotient by d-stable subspaces; returns (Q, projection, lifts)."""
    lifts, projs = {}, {}
    for n in c.degrees():
        sub = bases.get(n, Matrix.zeros(c.dim(n), 0))
        lifts[n], projs[n] = quotient_projection(sub, c.dim(n))
    dims = {n: lifts[n].ncols for n in c.degrees()}
    diffs = {n: projs[n + 1] @ c.d(n) @ lifts[n] for n in c.degrees() if n < c.hi}
    q = VectorComplex.from_maps(dims, diffs)
    proj = ChainMap(c, q, projs)
    return q, proj, lifts


def kernel_complex(u: ChainMap) -> tuple[VectorComplex, ChainMap]:
    return subcomplex(u.src, {n: kernel(u.at(n)) for n in u.src.degrees()})


def image_bases(u: ChainMap) -> dict:
    return {n: image(u.at(n)) for n in u.tgt.degrees() if n in u.src.degrees() or u.maps.get(n)}


def cokernel_complex(u: ChainMap) -> tuple[VectorComplex, ChainMap, dict]:
    bases = {n: image(u.at(n)) for n in u.tgt.degrees()}
    return quotient_complex(u.tgt, bases)


def corestrict(u: ChainMap, sub_inc: ChainMap) -> ChainMap:
    """Factor ``u`` through a subcomplex inclusion ``sub_inc`` of its target."""
    maps = {}
    for n in u.src.degrees():
        x = solve(sub_inc.at(n), u.at(n))
        if x is None:
            raise ComplexError("map does not land in the subcomplex")
        maps[n] = x
    return ChainMap(u.src, sub_inc.src, maps)


# filtered complexes and their spectral sequence


@dataclass
class FilteredVectorComplex:
    """Decreasing filtration: ``F^s`` is everything for s <= lo, zero for s > hi."""

    complex: VectorComplex
    steps: dict  # (s, n) -> column basis of F^s C^n for lo < s <= hi
    lo: int
    hi: int

    def F(self, s: int, n: int) -> Matrix:
        dim = self.complex.dim(n)
        if s <= self.lo:
            return Matrix.identity(dim)
        if s > self.hi:
            return Matrix.zeros(dim, 0)
        return self.steps.get((s, n), Matrix.zeros(dim, 0))

    def check(self) -> None:
        c = self.complex
        for n in c.degrees():
            for s in range(self.lo, self.hi + 1):
                from .linalg import contains
                if not contains(self.F(s, n), self.F(s + 1, n)):
                    raise ComplexError(f"filtration not decreasing at s={s}, n={n}")
                if not contains(self.F(s, n + 1), c.d(n) @ self.F(s, n)):
                    raise ComplexError(f"differential does not preserve F^{s} in degree {n}")


@dataclass
class SpectralPage:
    r: int
    dims: dict  # (p, q) -> dim E_r^{p,q}
    ranks: dict  # (p, q) -> rank of d_r leaving (p, q)

    def total(self, n: int) -> int:
        return sum(v for (p, q), v in self.dims.items() if p + q == n)

    def nonzero(self) -> dict:
        return {k: v for k, v in self.dims.items() if v}


class _SSData:
    def __init__(self, fc: FilteredVectorComplex):
        self.fc = fc
        self.c = fc.complex
        self._z: dict = {}
        self._b: dict = {}

    def Z(self, k: int, p: int, n: int) -> Matrix:
        key = (k, p, n)
        if key not in self._z:
            fp = self.fc.F(p, n)
            if fp.ncols == 0:
                out = fp
            else:
                target = self.fc.F(p + k, n + 1)
                from .linalg import annihilator
                ann = annihilator(target, self.c.dim(n + 1))
                cond = ann @ self.c.d(n) @ fp
                out = image(fp @ kernel(cond)) if cond.nrows else fp
            self._z[key] = out
        return self._z[key]

    def B(self, k: int, p: int, n: int) -> Matrix:
        key = (k, p, n)
        if key not in self._b:
            src = self.fc.F(p - k, n - 1)
            img = image(self.c.d(n - 1) @ src) if src.ncols else Matrix.zeros(self.c.dim(n), 0)
            self._b[key] = intersect(self.fc.F(p, n), img)
        return self._b[key]

    def denom(self, r: int, p: int, n: int) -> int:
        return subspace_sum(self.Z(r - 1, p + 1, n), self.B(r - 1, p, n)).ncols

    def e_dim(self, r: int, p: int, n: int) -> int:
        return self.Z(r, p, n).ncols - self.denom(r, p, n)

    def ker_dim(self, r: int, p: int, n: int) -> int:
        return subspace_sum(self.Z(r + 1, p, n), self.Z(r - 1, p + 1, n)).ncols - self.denom(r, p, n)

    def rank_in(self, r: int, p: int, n: int) -> int:
        return subspace_sum(self.B(r, p, n), self.Z(r - 1, p + 1, n)).ncols - self.denom(r, p, n)


def spectral_sequence(fc: FilteredVectorComplex, r_max: int | None = None, r_min: int = 1) -> list[SpectralPage]:
    """Pages ``E_r`` for ``r_min <= r <= r_max`` from the Z/B subquotient formulas.

    Keys are ``(p, q)`` with total degree ``n = p + q``; ``ranks`` holds the
    rank of ``d_r: E_r^{p,q} -> E_r^{p+r, q-r+1}``.
    """
    span = fc.hi - fc.lo + 1
    if r_max is None:
        r_max = span + 1
    ss = _SSData(fc)
    pages = []
    c = fc.complex
    for r in range(r_min, r_max + 1):
        dims, ranks = {}, {}
        for n in c.degrees():
            for p in range(fc.lo, fc.hi + 1):
                e = ss.e_dim(r, p, n)
                dims[(p, n - p)] = e
                ranks[(p, n - p)] = e - ss.ker_dim(r, p, n) if e else 0
        pages.append(SpectralPage(r, dims, ranks))
    return pages


def incoming_rank(fc: FilteredVectorComplex, r: int, p: int, q: int) -> int:
    """Rank of ``d_r`` arriving at ``E_r^{p,q}`` (computed from boundaries)."""
    return _SSData(fc).rank_in(r, p, p + q)
