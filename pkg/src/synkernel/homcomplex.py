"""Complexes over a coefficient layer and their internal Hom complexes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .complexes import ChainMap, ComplexError, VectorComplex, subcomplex
from .fields import K, K0, CoefficientTower
from .filtration import Filtration, hom_filtration_step
from .linalg import ZERO, Matrix
from .restriction import HomSpace, extend_matrix


@dataclass
class LayerComplex:
    """Bounded complex of ``layer``-spaces on the Q-model.

    ``phi``/``nmat`` (K0 layer) and ``filts`` (K layer) are optional
    per-degree structures, indexed like ``dims``.
    """

    tower: CoefficientTower
    layer: str
    lo: int
    dims: tuple
    diffs: tuple
    phi: tuple | None = None
    nmat: tuple | None = None
    filts: tuple | None = None

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, n: int) -> int:
        return self.dims[n - self.lo] if self.lo <= n <= self.hi else 0

    def qdim(self, n: int) -> int:
        return self.dim(n) * self.tower.deg(self.layer)

    def d(self, n: int) -> Matrix:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return Matrix.zeros(self.qdim(n + 1), self.qdim(n))

    def phi_at(self, n: int) -> Matrix:
        return self.phi[n - self.lo] if self.lo <= n <= self.hi else Matrix.zeros(0, 0)

    def n_at(self, n: int) -> Matrix:
        return self.nmat[n - self.lo] if self.lo <= n <= self.hi else Matrix.zeros(0, 0)

    def filt_at(self, n: int) -> Filtration:
        if self.lo <= n <= self.hi:
            return self.filts[n - self.lo]
        return Filtration(self.tower, 0, 0, 0)

    def vector_complex(self) -> VectorComplex:
        if not self.dims:
            return VectorComplex(0, ())
        return VectorComplex(self.lo, [self.qdim(n) for n in self.degrees()], list(self.diffs), check=False)

    def extend(self) -> "LayerComplex":
        """Scalar extension K0 -> K (structures other than the complex dropped)."""
        if self.layer != K0:
            raise ValueError("only K0 complexes extend")
        return LayerComplex(self.tower, K, self.lo, self.dims,
                            tuple(extend_matrix(self.tower, d) for d in self.diffs))

    def with_filtrations(self, filts: Sequence[Filtration]) -> "LayerComplex":
        return LayerComplex(self.tower, self.layer, self.lo, self.dims, self.diffs, self.phi, self.nmat, tuple(filts))


class HomComplex:
    """``Hom^n = prod_j Hom(X^j, Y^{n+j})`` with
    ``d^n(f)_j = f_{j+1} d_X^j + (-1)^{n+1} d_Y^{n+j} f_j``."""

    def __init__(self, x: LayerComplex, y: LayerComplex):
        if x.layer != y.layer:
            raise ValueError("Hom complex needs a common layer")
        if not x.tower.same_as(y.tower):
            raise ValueError("tower mismatch")
        self.x, self.y = x, y
        self.tower = x.tower
        self.layer = x.layer
        self.blocks: dict[int, dict[int, tuple[int, HomSpace]]] = {}
        if not x.dims or not y.dims:
            self.vc = VectorComplex(0, ())
            return
        lo, hi = y.lo - x.hi, y.hi - x.lo
        dims = {}
        for n in range(lo, hi + 1):
            off = 0
            table = {}
            for j in x.degrees():
                if y.lo <= n + j <= y.hi:
                    hs = HomSpace(self.tower, self.layer, x.dim(j), y.dim(n + j))
                    table[j] = (off, hs)
                    off += hs.qdim
            self.blocks[n] = table
            dims[n] = off
        diffs = {}
        for n in range(lo, hi):
            m = Matrix.zeros(dims[n + 1], dims[n])
            sign = (-1) ** (n + 1)
            for j, (toff, ths) in self.blocks[n + 1].items():
                # f_{j+1} o d_X^j
                if j + 1 in self.blocks[n]:
                    soff, shs = self.blocks[n][j + 1]
                    _put(m, toff, soff, shs.op(ths, pre=x.d(j)))
                if j in self.blocks[n]:
                    soff, shs = self.blocks[n][j]
                    _put(m, toff, soff, shs.op(ths, post=y.d(n + j).scale(sign)))
            diffs[n] = m
        self.vc = VectorComplex.from_maps(dims, diffs)

    def degrees(self) -> range:
        return self.vc.degrees()

    def block(self, n: int, j: int):
        return self.blocks.get(n, {}).get(j)

    def degreewise(self, target: "HomComplex", post: Callable | None = None, pre: Callable | None = None) -> ChainMap:
        """The map ``g_j -> post(n+j) g_j pre(j)``; callables return a Q-matrix or None."""
        maps = {}
        for n in self.degrees():
            m = Matrix.zeros(target.vc.dim(n), self.vc.dim(n))
            for j, (soff, shs) in self.blocks.get(n, {}).items():
                tb = target.block(n, j)
                if tb is None:
                    continue
                toff, ths = tb
                pm = post(n + j) if post else None
                rm = pre(j) if pre else None
                _put(m, toff, soff, shs.op(ths, post=pm, pre=rm))
            maps[n] = m
        return ChainMap(self.vc, target.vc, maps)

    def ext_to(self, target: "HomComplex") -> ChainMap:
        maps = {}
        for n in self.degrees():
            m = Matrix.zeros(target.vc.dim(n), self.vc.dim(n))
            for j, (soff, shs) in self.blocks.get(n, {}).items():
                toff, ths = target.block(n, j)
                _put(m, toff, soff, shs.ext_to(ths))
            maps[n] = m
        return ChainMap(self.vc, target.vc, maps)

    def filtration_step_bases(self, i: int = 0) -> dict:
        """Per-degree bases of ``F^i Hom`` (K layer, filtrations on both sides)."""
        if self.layer != K:
            raise ValueError("filtration lives on the K-layer Hom complex")
        out = {}
        for n in self.degrees():
            cols = []
            for j, (off, hs) in self.blocks[n].items():
                sub = hom_filtration_step(hs, self.x.filt_at(j), self.y.filt_at(n + j), i)
                cols.append((off, hs.qdim, sub))
            out[n] = _block_basis(self.vc.dim(n), cols)
        return out

    def filtration_subcomplex(self, i: int = 0):
        return subcomplex(self.vc, self.filtration_step_bases(i))

    def element(self, n: int, maps: dict) -> list:
        """Coordinates in ``Hom^n`` of a family ``{j: Q-matrix X^j -> Y^{n+j}}``."""
        vec = [ZERO] * self.vc.dim(n)
        for j, g in maps.items():
            b = self.block(n, j)
            if b is None:
                if not g.is_zero():
                    raise ComplexError(f"no Hom block for source degree {j}")
                continue
            off, hs = b
            for idx, c in enumerate(hs.coords(g)):
                vec[off + idx] = c
        return vec

    def components(self, n: int, vec) -> dict:
        """Inverse of :meth:`element`."""
        out = {}
        for j, (off, hs) in self.blocks.get(n, {}).items():
            out[j] = hs.to_matrix(list(vec[off:off + hs.qdim]))
        return out


def _put(m: Matrix, r0: int, c0: int, blk: Matrix) -> None:
    for i, row in enumerate(blk.rows):
        dst = m.rows[r0 + i]
        for j, v in enumerate(row):
            if v:
                dst[c0 + j] = v


def _block_basis(total: int, parts) -> Matrix:
    cols = []
    for off, size, sub in parts:
        for col in sub.columns():
            full = [ZERO] * total
            full[off:off + size] = col
            cols.append(full)
    return Matrix.from_columns(cols, total)
