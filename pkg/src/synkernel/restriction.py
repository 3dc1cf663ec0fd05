"""Restriction of scalars from K0 / K to Q, and spaces of layer-linear maps.

A vector of ``layer^d`` is stored as a Q-vector of length ``d * deg`` with
index ``i * deg + k`` (coordinate k of the i-th entry).  A layer-linear map
becomes a block matrix whose (i, j) block is the multiplication matrix of
the (i, j) entry.  A sigma-semilinear map ``v -> A sigma(v)`` becomes
``mult(A) @ S`` with S the block-diagonal sigma matrix.
"""

from __future__ import annotations

from typing import Sequence

from .fields import K, K0, CoefficientTower
from .linalg import ZERO, Matrix, image, to_q


def layer_matrix(tower: CoefficientTower, layer: str, entries: Sequence[Sequence]) -> Matrix:
    """Q-matrix of a layer-linear map given by entry coordinates (target x source)."""
    deg = tower.deg(layer)
    nr = len(entries)
    nc = len(entries[0]) if nr else 0
    out = Matrix.zeros(nr * deg, nc * deg)
    for i, row in enumerate(entries):
        for j, a in enumerate(row):
            if any(a):
                blk = tower.mult_matrix(layer, a)
                for r in range(deg):
                    dst = out.rows[i * deg + r]
                    src = blk.rows[r]
                    for c in range(deg):
                        if src[c]:
                            dst[j * deg + c] = src[c]
    return out


def layer_entries(tower: CoefficientTower, layer: str, m: Matrix) -> list[list[tuple]]:
    """Entry coordinates of a layer-linear Q-matrix (read off block column 0)."""
    deg = tower.deg(layer)
    nr, nc = m.nrows // deg, m.ncols // deg
    return [[tuple(m.rows[i * deg + k][j * deg] for k in range(deg)) for j in range(nc)] for i in range(nr)]


def sigma_block(tower: CoefficientTower, d: int) -> Matrix:
    return Matrix.diag([tower.sigma_matrix] * d) if d else Matrix.zeros(0, 0)


def restrict_scalars(tower: CoefficientTower, layer: str, entries: Sequence[Sequence], semilinear: bool = False) -> Matrix:
    """Prime-field model of a matrix over ``layer``.

    With ``semilinear`` the matrix is read as ``v -> A sigma(v)`` (K0 only).
    """
    ents = [[_coords(tower, layer, a) for a in row] for row in entries]
    m = layer_matrix(tower, layer, ents)
    if semilinear:
        if layer != K0:
            raise ValueError("semilinear maps live over K0")
        m = m @ sigma_block(tower, len(entries[0]) if entries else 0)
    return m


def _coords(tower: CoefficientTower, layer: str, a) -> tuple:
    if hasattr(a, "coords"):
        return tower.element(layer, a).coords
    if isinstance(a, (list, tuple)):
        return tuple(to_q(v) for v in a)
    return tower.element(layer, a).coords


def is_layer_linear(tower: CoefficientTower, layer: str, m: Matrix) -> bool:
    deg = tower.deg(layer)
    if deg == 1:
        return True
    if m.nrows % deg or m.ncols % deg:
        return False
    for mult in tower.basis_mults(layer)[1:]:
        left = Matrix.diag([mult] * (m.nrows // deg)) if m.nrows else Matrix.zeros(0, 0)
        right = Matrix.diag([mult] * (m.ncols // deg)) if m.ncols else Matrix.zeros(0, 0)
        if left @ m != m @ right:
            return False
    return True


def linear_part(tower: CoefficientTower, phi: Matrix) -> Matrix:
    """For a semilinear ``phi = A_q S`` return the K0-linear ``A_q``."""
    d = phi.ncols // tower.f
    return phi @ sigma_block(tower, d).inverse() if d else phi


def extension_map(tower: CoefficientTower, d: int) -> Matrix:
    """Embedding K0^d -> K^d on Q-coordinates."""
    f, ef = tower.f, tower.e * tower.f
    out = Matrix.zeros(d * ef, d * f)
    for i in range(d):
        for a in range(f):
            out.rows[i * ef + a][i * f + a] = to_q(1)
    return out


def extend_matrix(tower: CoefficientTower, t: Matrix) -> Matrix:
    """K-linear extension of a K0-linear Q-matrix."""
    f, e = tower.f, tower.e
    if e == 1:
        return t.copy()
    ef = e * f
    nr, nc = t.nrows // f, t.ncols // f
    out = Matrix.zeros(nr * ef, nc * ef)
    for r, row in enumerate(t.rows):
        i, a = divmod(r, f)
        for c, v in enumerate(row):
            if v:
                j, a2 = divmod(c, f)
                for b in range(e):
                    out.rows[i * ef + a + f * b][j * ef + a2 + f * b] = v
    return out


def layer_span(tower: CoefficientTower, layer: str, vectors: Matrix) -> Matrix:
    """Q-basis of the layer-span of the columns of ``vectors``."""
    deg = tower.deg(layer)
    if vectors.ncols == 0 or deg == 1:
        return image(vectors) if vectors.ncols else vectors
    d = vectors.nrows // deg
    cols = []
    for mult in tower.basis_mults(layer):
        big = Matrix.diag([mult] * d)
        cols.append(big @ vectors)
    return image(Matrix.hstack(cols))


def is_layer_stable(tower: CoefficientTower, layer: str, sub: Matrix) -> bool:
    from .linalg import contains
    deg = tower.deg(layer)
    if deg == 1 or sub.ncols == 0:
        return True
    d = sub.nrows // deg
    return all(contains(sub, Matrix.diag([m] * d) @ sub) for m in tower.basis_mults(layer)[1:])


def layer_basis(tower: CoefficientTower, layer: str, sub: Matrix) -> Matrix:
    """Columns of ``sub`` forming a basis over ``layer`` of its layer-span."""
    from .linalg import rank
    deg = tower.deg(layer)
    if deg == 1:
        return image(sub) if sub.ncols else sub
    chosen: list[list] = []
    span = Matrix.zeros(sub.nrows, 0)
    for col in sub.columns():
        if not any(col):
            continue
        trial = Matrix.hstack([span, Matrix.from_columns([col], sub.nrows)])
        if rank(layer_span(tower, layer, trial)) > span.ncols:
            chosen.append(col)
            span = layer_span(tower, layer, Matrix.from_columns(chosen, sub.nrows))
    return Matrix.from_columns(chosen, sub.nrows)


def vector_to_entries(tower: CoefficientTower, layer: str, vec: Sequence) -> list[tuple]:
    deg = tower.deg(layer)
    return [tuple(vec[i * deg:(i + 1) * deg]) for i in range(len(vec) // deg)]


def entries_to_vector(tower: CoefficientTower, layer: str, entries: Sequence) -> list:
    out = []
    for a in entries:
        out.extend(_coords(tower, layer, a))
    return out


class HomSpace:
    """Q-model of ``Hom_layer(layer^src, layer^tgt)``.

    Basis element ``(i * src + j) * deg + k`` has block (i, j) equal to the
    k-th basis multiplication matrix and all other blocks zero.
    """

    __slots__ = ("tower", "layer", "src", "tgt", "deg")

    def __init__(self, tower: CoefficientTower, layer: str, src: int, tgt: int):
        self.tower = tower
        self.layer = layer
        self.src = src
        self.tgt = tgt
        self.deg = tower.deg(layer)

    @property
    def qdim(self) -> int:
        return self.src * self.tgt * self.deg

    def index(self, i: int, j: int, k: int) -> int:
        return (i * self.src + j) * self.deg + k

    def basis_element(self, idx: int) -> Matrix:
        ij, k = divmod(idx, self.deg)
        i, j = divmod(ij, self.src)
        deg = self.deg
        out = Matrix.zeros(self.tgt * deg, self.src * deg)
        blk = self.tower.basis_mults(self.layer)[k]
        for r in range(deg):
            for c in range(deg):
                if blk.rows[r][c]:
                    out.rows[i * deg + r][j * deg + c] = blk.rows[r][c]
        return out

    def coords(self, g: Matrix) -> list:
        deg = self.deg
        out = [ZERO] * self.qdim
        for i in range(self.tgt):
            for j in range(self.src):
                for k in range(deg):
                    out[self.index(i, j, k)] = g.rows[i * deg + k][j * deg]
        return out

    def to_matrix(self, coords: Sequence) -> Matrix:
        out = Matrix.zeros(self.tgt * self.deg, self.src * self.deg)
        for idx, c in enumerate(coords):
            if c:
                out = out + self.basis_element(idx).scale(c)
        return out

    def op(self, target: "HomSpace", post: Matrix | None = None, pre: Matrix | None = None) -> Matrix:
        """Matrix of ``g -> post @ g @ pre`` from this space to ``target``."""
        deg = self.deg
        if target.layer != self.layer:
            raise ValueError("op needs a common layer")
        out = Matrix.zeros(target.qdim, self.qdim)
        if self.qdim == 0 or target.qdim == 0:
            return out
        mults = self.tower.basis_mults(self.layer)
        # pre restricted to the columns b*deg of the target source blocks
        sel = [b * deg for b in range(target.src)]
        if pre is None:
            if target.src != self.src:
                raise ValueError("identity pre needs equal sources")
            pre_sel = Matrix.identity(self.src * deg).select_columns(sel)
        else:
            pre_sel = pre.select_columns(sel)
        if post is None and target.tgt != self.tgt:
            raise ValueError("identity post needs equal targets")
        for i in range(self.tgt):
            if post is None:
                p_i = None
            else:
                p_i = post.submatrix(0, post.nrows, i * deg, (i + 1) * deg)
                if p_i.is_zero():
                    continue
            for j in range(self.src):
                r_j = pre_sel.submatrix(j * deg, (j + 1) * deg, 0, pre_sel.ncols)
                if r_j.is_zero():
                    continue
                for k in range(deg):
                    y = mults[k] @ r_j
                    if p_i is None:
                        full = Matrix.zeros(target.tgt * deg, target.src)
                        for r in range(deg):
                            full.rows[i * deg + r] = list(y.rows[r])
                        y = full
                    else:
                        y = p_i @ y
                    col = self.index(i, j, k)
                    for a in range(target.tgt):
                        for kk in range(deg):
                            row = y.rows[a * deg + kk]
                            for b in range(target.src):
                                v = row[b]
                                if v:
                                    out.rows[target.index(a, b, kk)][col] = v
        return out

    def ext_to(self, target: "HomSpace") -> Matrix:
        """Coordinate map ``Hom_K0 -> Hom_K`` of scalar extension."""
        if self.layer != K0 or target.layer != K or (self.src, self.tgt) != (target.src, target.tgt):
            raise ValueError("ext_to maps Hom_K0 to Hom_K of the same shape")
        out = Matrix.zeros(target.qdim, self.qdim)
        for i in range(self.tgt):
            for j in range(self.src):
                for a in range(self.deg):
                    out.rows[target.index(i, j, a)][self.index(i, j, a)] = to_q(1)
        return out

    def evaluation(self, vec: Sequence) -> Matrix:
        """Matrix of ``coords -> g @ vec``."""
        deg = self.deg
        out = Matrix.zeros(self.tgt * deg, self.qdim)
        mults = self.tower.basis_mults(self.layer)
        for j in range(self.src):
            vj = list(vec[j * deg:(j + 1) * deg])
            if not any(vj):
                continue
            for k in range(deg):
                w = mults[k] @ vj
                for i in range(self.tgt):
                    col = self.index(i, j, k)
                    for r in range(deg):
                        if w[r]:
                            out.rows[i * deg + r][col] = w[r]
        return out
