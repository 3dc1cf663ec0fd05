"""Decreasing filtrations on K-vector spaces (stored on the Q-model)."""

from __future__ import annotations

from typing import Iterable, Sequence

from .fields import K, CoefficientTower
from .linalg import Matrix, annihilator, contains, image, intersect, kernel, same_span, subspace_sum
from .restriction import HomSpace, entries_to_vector, is_layer_stable, layer_basis, layer_span, vector_to_entries


class FiltrationError(ValueError):
    pass


class Filtration:
    """``F^k`` is everything for ``k <= lo``, zero for ``k >= hi``.

    ``steps[k]`` holds a Q-basis (columns, K-stable) of ``F^k`` for
    ``lo < k < hi``.  The ambient space is ``K^dim``.
    """

    __slots__ = ("tower", "dim", "lo", "hi", "steps")

    def __init__(self, tower: CoefficientTower, dim: int, lo: int, hi: int, steps: dict | None = None):
        self.tower = tower
        self.dim = dim
        steps = dict(steps or {})
        qdim = self.qdim
        levels = {k: steps.get(k, Matrix.zeros(qdim, 0)) for k in range(lo + 1, hi)}
        # normalize: push lo up / hi down past trivial steps
        while lo + 1 < hi and levels.get(lo + 1) is not None and levels[lo + 1].ncols == qdim:
            levels.pop(lo + 1)
            lo += 1
        while hi - 1 > lo and levels.get(hi - 1) is not None and levels[hi - 1].ncols == 0:
            levels.pop(hi - 1)
            hi -= 1
        if qdim == 0:
            lo, hi, levels = 0, 0, {}
        elif hi <= lo:
            raise FiltrationError("filtration must reach zero above everything")
        self.lo, self.hi, self.steps = lo, hi, levels

    @property
    def qdim(self) -> int:
        return self.dim * self.tower.deg(K)

    @classmethod
    def trivial(cls, tower: CoefficientTower, dim: int, jump: int = 0) -> "Filtration":
        """``F^jump`` everything, ``F^{jump+1} = 0``."""
        return cls(tower, dim, jump, jump + 1)

    @classmethod
    def from_jumps(cls, tower: CoefficientTower, dim: int, jumps: Sequence) -> "Filtration":
        """Build from ``[(i, [K-vectors...]), ...]``.

        ``F^k`` is everything below the lowest listed index, the entry with
        the smallest listed index ``>= k`` otherwise, and zero above the
        highest index.  Vectors are lists of K elements (coordinates or
        scalars accepted by ``tower.element``).
        """
        qdim = dim * tower.deg(K)
        if dim == 0:
            return cls(tower, 0, 0, 0)
        if not jumps:
            raise FiltrationError("empty jump list")
        table = {}
        for idx, vecs in jumps:
            idx = int(idx)
            if idx in table:
                raise FiltrationError(f"jump index {idx} listed twice")
            cols = []
            for v in vecs:
                if len(v) != dim:
                    raise FiltrationError(f"filtration vector has length {len(v)}, expected {dim}")
                cols.append(entries_to_vector(tower, K, v))
            table[idx] = layer_span(tower, K, Matrix.from_columns(cols, qdim)) if cols else Matrix.zeros(qdim, 0)
        keys = sorted(table)
        lo, hi = keys[0] - 1, keys[-1] + 1
        steps = {}
        for k in range(lo + 1, hi):
            nxt = min(i for i in keys if i >= k)
            steps[k] = table[nxt]
        out = cls(tower, dim, lo, hi, steps)
        out.check()
        return out

    def F(self, k: int) -> Matrix:
        if k <= self.lo:
            return Matrix.identity(self.qdim)
        if k >= self.hi:
            return Matrix.zeros(self.qdim, 0)
        return self.steps[k]

    def check(self) -> None:
        for k in range(self.lo, self.hi):
            if not contains(self.F(k), self.F(k + 1)):
                raise FiltrationError(f"F^{k + 1} is not contained in F^{k}")
            if not is_layer_stable(self.tower, K, self.F(k + 1)):
                raise FiltrationError(f"F^{k + 1} is not a K-subspace")

    def is_valid(self) -> bool:
        try:
            self.check()
        except FiltrationError:
            return False
        return True

    def kdim(self, k: int) -> int:
        return self.F(k).ncols // self.tower.deg(K)

    def gr_dims(self) -> dict:
        return {k: self.kdim(k) - self.kdim(k + 1) for k in range(self.lo, self.hi) if self.kdim(k) - self.kdim(k + 1)}

    def hodge_number(self) -> int:
        return sum(k * g for k, g in self.gr_dims().items())

    def jumps(self) -> list[tuple[int, Matrix]]:
        """Canonical jump list ``(k, F^k)`` at every k with ``F^k != F^{k+1}``."""
        return [(k, self.F(k)) for k in range(self.lo, self.hi) if self.F(k).ncols != self.F(k + 1).ncols]

    def jump_vectors(self) -> list[tuple[int, list]]:
        """Jumps with K-bases written as lists of K-coordinate tuples."""
        out = []
        for k, sub in self.jumps():
            basis = layer_basis(self.tower, K, sub)
            out.append((k, [vector_to_entries(self.tower, K, col) for col in basis.columns()]))
        return out

    def shift(self, n: int) -> "Filtration":
        """``F'^k = F^{k+n}``."""
        return Filtration(self.tower, self.dim, self.lo - n, self.hi - n,
                          {k - n: v for k, v in self.steps.items()})

    def transform(self, m: Matrix) -> "Filtration":
        """Image under an invertible K-linear Q-matrix ``m``."""
        return Filtration(self.tower, self.dim, self.lo, self.hi,
                          {k: image(m @ v) if v.ncols else v for k, v in self.steps.items()})

    def restrict(self, sub: Matrix) -> list:
        """Dimensions over Q of ``F^k ∩ sub`` for k in ``lo..hi``."""
        return [intersect(self.F(k), sub).ncols for k in range(self.lo, self.hi + 1)]

    def hodge_number_on(self, sub_k: Matrix) -> int:
        """Hodge number of the induced filtration ``F^k ∩ sub`` on a K-subspace."""
        deg = self.tower.deg(K)
        dims = {k: intersect(self.F(k), sub_k).ncols // deg for k in range(self.lo, self.hi + 1)}
        return sum(k * (dims[k] - dims[k + 1]) for k in range(self.lo, self.hi))

    def equals(self, other: "Filtration") -> bool:
        if self.dim != other.dim:
            return False
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return all(same_span(self.F(k), other.F(k)) for k in range(lo, hi + 1))

    def is_preserved_by(self, m: Matrix, other: "Filtration") -> bool:
        """Does the K-linear Q-matrix ``m`` send ``F^k`` into ``other.F^k`` for all k?"""
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        for k in range(lo, hi + 1):
            src = self.F(k)
            if src.ncols and not contains(other.F(k), m @ src):
                return False
        return True


def direct_sum_filtration(fs: Sequence[Filtration], tower: CoefficientTower | None = None) -> Filtration:
    fs = list(fs)
    if tower is None:
        tower = fs[0].tower
    dim = sum(f.dim for f in fs)
    if dim == 0:
        return Filtration(tower, 0, 0, 0)
    nz = [f for f in fs if f.dim]
    lo = min(f.lo for f in nz)
    hi = max(f.hi for f in nz)
    steps = {k: Matrix.diag([f.F(k) for f in fs]) for k in range(lo + 1, hi)}
    return Filtration(tower, dim, lo, hi, steps)


def filtration_from_function(tower: CoefficientTower, dim: int, lo: int, hi: int, fn) -> Filtration:
    return Filtration(tower, dim, lo, hi, {k: fn(k) for k in range(lo + 1, hi)})


def hom_filtration_step(hs: HomSpace, fsrc: Filtration, ftgt: Filtration, i: int) -> Matrix:
    """Coordinates (columns) of ``F^i Hom_K``: maps with ``g(F^j) ⊂ F^{i+j}``."""
    if hs.layer != K:
        raise ValueError("filtration lives on Hom over K")
    if hs.qdim == 0:
        return Matrix.zeros(0, 0)
    rows = []
    qt = ftgt.qdim
    for j in range(fsrc.lo, fsrc.hi):
        src = fsrc.F(j)
        if src.ncols == 0:
            continue
        tgt = ftgt.F(i + j)
        if tgt.ncols == qt:
            continue
        ann = annihilator(tgt, qt)
        for col in layer_basis(hs.tower, K, src).columns():
            rows.append(ann @ hs.evaluation(col))
    if not rows:
        return Matrix.identity(hs.qdim)
    return kernel(Matrix.vstack(rows, hs.qdim))


def hom_filtration(hs: HomSpace, fsrc: Filtration, ftgt: Filtration) -> Filtration:
    if hs.qdim == 0:
        return Filtration(hs.tower, 0, 0, 0)
    lo = ftgt.lo - fsrc.hi + 1
    hi = ftgt.hi - fsrc.lo
    steps = {i: hom_filtration_step(hs, fsrc, ftgt, i) for i in range(lo + 1, hi)}
    return Filtration(hs.tower, hs.src * hs.tgt, lo, hi, steps)


def tensor_filtration(tower: CoefficientTower, fl: Filtration, fm: Filtration, kron) -> Filtration:
    """Convolution filtration; ``kron(u, w)`` builds the Q-vector of ``u ⊗ w``."""
    dim = fl.dim * fm.dim
    if dim == 0:
        return Filtration(tower, 0, 0, 0)
    lo = fl.lo + fm.lo
    hi = fl.hi + fm.hi - 1
    qdim = dim * tower.deg(K)
    steps = {}
    for i in range(lo + 1, hi):
        cols = []
        for j in range(fl.lo, fl.hi + 1):
            a = fl.F(j)
            b = fm.F(i - j)
            if a.ncols == 0 or b.ncols == 0:
                continue
            ka = layer_basis(tower, K, a)
            for u in ka.columns():
                for w in b.columns():
                    cols.append(kron(u, w))
        steps[i] = image(Matrix.from_columns(cols, qdim)) if cols else Matrix.zeros(qdim, 0)
    return Filtration(tower, dim, lo, hi, steps)


def sum_of_spans(mats: Iterable[Matrix], n: int) -> Matrix:
    out = Matrix.zeros(n, 0)
    for m in mats:
        out = subspace_sum(out, m)
    return out
