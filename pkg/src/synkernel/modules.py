"""Filtered (phi, N)-modules over K.

Internally a module of dimension d over K0 stores

* ``phi``: Q-matrix of size ``d*f`` with ``phi(v) = phi @ v`` (sigma included),
* ``nmat``: Q-matrix of the K0-linear monodromy,
* ``filt``: a :class:`Filtration` on ``K^d``.

At the user boundary the Frobenius matrix A follows the row convention
``phi(e_i) = sum_j a_ij e_j``, so the internal matrix is ``A^T sigma``.
The monodromy matrix given in the same row convention is transposed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .fields import K, K0, CoefficientTower, vp_rational
from .filtration import (
    Filtration,
    FiltrationError,
    direct_sum_filtration,
    hom_filtration,
    tensor_filtration,
)
from .linalg import ONE, ZERO, Matrix, contains, image, kernel, solve, to_q
from .restriction import (
    HomSpace,
    extend_matrix,
    extension_map,
    layer_entries,
    layer_matrix,
    layer_span,
    linear_part,
    sigma_block,
)


class ModuleError(ValueError):
    pass


@dataclass
class ValidationReport:
    ok: bool
    failure: str | None = None
    detail: str = ""
    checks: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "failure": self.failure, "detail": self.detail, "checks": list(self.checks)}

    def __bool__(self) -> bool:
        return self.ok


# axiom names used in reports
PHI_INVERTIBLE = "phi-invertible"
PHI_SEMILINEAR = "phi-sigma-semilinear"
N_PHI_RELATION = "N-phi=p-phi-N"
N_NILPOTENT = "N-nilpotent"
FILTRATION = "filtration-well-formed"
N_LINEAR = "N-K0-linear"


class FilteredPhiNModule:
    __slots__ = ("tower", "dim", "phi", "nmat", "filt", "name")

    def __init__(self, tower: CoefficientTower, dim: int, phi: Matrix, nmat: Matrix | None, filt: Filtration,
                 name: str = ""):
        q = dim * tower.f
        if phi.shape != (q, q):
            raise ModuleError(f"phi has shape {phi.shape}, expected {(q, q)}")
        nmat = nmat if nmat is not None else Matrix.zeros(q, q)
        if nmat.shape != (q, q):
            raise ModuleError(f"N has shape {nmat.shape}, expected {(q, q)}")
        if filt.dim != dim:
            raise ModuleError("filtration dimension does not match module")
        self.tower = tower
        self.dim = dim
        self.phi = phi
        self.nmat = nmat
        self.filt = filt
        self.name = name

    # construction from row-convention data

    @classmethod
    def from_data(cls, tower: CoefficientTower, phi_rows: Sequence[Sequence], n_rows: Sequence[Sequence] | None,
                  jumps: Sequence, name: str = "") -> "FilteredPhiNModule":
        d = len(phi_rows)
        if any(len(r) != d for r in phi_rows):
            raise ModuleError("Frobenius matrix must be square")
        a = [[_k0(tower, v) for v in row] for row in phi_rows]
        at = [[a[j][i] for j in range(d)] for i in range(d)]
        phi = layer_matrix(tower, K0, at) @ sigma_block(tower, d) if d else Matrix.zeros(0, 0)
        if n_rows is None:
            nmat = Matrix.zeros(d * tower.f, d * tower.f)
        else:
            if len(n_rows) != d or any(len(r) != d for r in n_rows):
                raise ModuleError("monodromy matrix must be d x d")
            nn = [[_k0(tower, v) for v in row] for row in n_rows]
            nmat = layer_matrix(tower, K0, [[nn[j][i] for j in range(d)] for i in range(d)]) if d else Matrix.zeros(0, 0)
        filt = Filtration.from_jumps(tower, d, jumps)
        return cls(tower, d, phi, nmat, filt, name)

    def phi_rows(self) -> list[list[tuple]]:
        """Frobenius matrix A in the row convention (K0 coordinates)."""
        lin = linear_part(self.tower, self.phi)
        ent = layer_entries(self.tower, K0, lin)
        return [[ent[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def n_rows(self) -> list[list[tuple]]:
        ent = layer_entries(self.tower, K0, self.nmat)
        return [[ent[j][i] for j in range(self.dim)] for i in range(self.dim)]

    # basic properties

    @property
    def qdim(self) -> int:
        return self.dim * self.tower.f

    @property
    def kqdim(self) -> int:
        return self.dim * self.tower.e * self.tower.f

    @property
    def phi_lin(self) -> Matrix:
        return linear_part(self.tower, self.phi)

    def phi_inverse(self) -> Matrix:
        return self.phi.inverse()

    def n_k(self) -> Matrix:
        return extend_matrix(self.tower, self.nmat)

    def validate(self) -> ValidationReport:
        return validate(self)

    def newton_number(self):
        return newton_number(self)

    def hodge_number(self) -> int:
        return self.filt.hodge_number()

    def __repr__(self) -> str:
        nm = f" {self.name}" if self.name else ""
        return f"<FilteredPhiNModule{nm} dim={self.dim} tN={newton_number(self)} tH={self.hodge_number()}>"


def _k0(tower: CoefficientTower, v) -> tuple:
    return tower.element(K0, list(v) if isinstance(v, (list, tuple)) else v).coords


# validation


def validate(m: FilteredPhiNModule) -> ValidationReport:
    checks = []
    t = m.tower
    if m.dim and m.phi.det() == 0:
        return ValidationReport(False, PHI_INVERTIBLE, "det(phi) = 0", checks)
    checks.append(PHI_INVERTIBLE)
    from .restriction import is_layer_linear, linear_part
    if not is_layer_linear(t, K0, linear_part(t, m.phi)):
        return ValidationReport(False, PHI_SEMILINEAR, "phi is not sigma-semilinear", checks)
    checks.append(PHI_SEMILINEAR)
    if not is_layer_linear(t, K0, m.nmat):
        return ValidationReport(False, N_LINEAR, "N does not commute with K0 scalars", checks)
    checks.append(N_LINEAR)
    lhs = m.nmat @ m.phi
    rhs = (m.phi @ m.nmat).scale(t.p)
    if lhs != rhs:
        bad = next(j for j in range(m.qdim) if lhs.column(j) != rhs.column(j))
        return ValidationReport(False, N_PHI_RELATION, f"fails on basis vector {bad // t.f}", checks)
    checks.append(N_PHI_RELATION)
    if m.dim and not m.nmat.power(m.dim).is_zero():
        return ValidationReport(False, N_NILPOTENT, "N^d != 0", checks)
    checks.append(N_NILPOTENT)
    try:
        m.filt.check()
    except FiltrationError as exc:
        return ValidationReport(False, FILTRATION, str(exc), checks)
    checks.append(FILTRATION)
    return ValidationReport(True, None, "", checks)


# invariants


def _vp_det(tower: CoefficientTower, mat: Matrix):
    if mat.ncols == 0:
        return 0
    v = vp_rational(mat.det(), tower.p)
    r = to_q(v) / tower.f
    return int(r) if r.denominator == 1 else r


def newton_number(m: FilteredPhiNModule):
    """``v_p(det A)``; computed as ``v_p(det phi_Q) / f``."""
    return _vp_det(m.tower, m.phi)


def hodge_number(m: FilteredPhiNModule) -> int:
    return m.filt.hodge_number()


# tannakian operations


def _same_tower(a: FilteredPhiNModule, b: FilteredPhiNModule) -> CoefficientTower:
    if not a.tower.same_as(b.tower):
        raise ModuleError("tower mismatch")
    return a.tower


def _kron_layer(tower: CoefficientTower, layer: str, a: Matrix, b: Matrix) -> Matrix:
    ea = layer_entries(tower, layer, a)
    eb = layer_entries(tower, layer, b)
    ra, ca = len(ea), len(ea[0]) if ea else 0
    rb, cb = len(eb), len(eb[0]) if eb else 0
    ents = [[tower.mul(layer, ea[i][j], eb[k][l]) for j in range(ca) for l in range(cb)]
            for i in range(ra) for k in range(rb)]
    if not ents or not ents[0]:
        return Matrix.zeros(ra * rb * tower.deg(layer), ca * cb * tower.deg(layer))
    return layer_matrix(tower, layer, ents)


def _kron_vec(tower: CoefficientTower, layer: str, u: Sequence, w: Sequence) -> list:
    deg = tower.deg(layer)
    out = []
    for i in range(len(u) // deg):
        ui = u[i * deg:(i + 1) * deg]
        for j in range(len(w) // deg):
            out.extend(tower.mul(layer, ui, w[j * deg:(j + 1) * deg]))
    return out


def tensor(l: FilteredPhiNModule, m: FilteredPhiNModule) -> FilteredPhiNModule:
    t = _same_tower(l, m)
    d = l.dim * m.dim
    phi = _kron_layer(t, K0, l.phi_lin, m.phi_lin) @ sigma_block(t, d)
    eye_l = Matrix.identity(l.qdim)
    eye_m = Matrix.identity(m.qdim)
    nmat = _kron_layer(t, K0, l.nmat, eye_m) + _kron_layer(t, K0, eye_l, m.nmat)
    filt = tensor_filtration(t, l.filt, m.filt, lambda u, w: _kron_vec(t, K, u, w))
    return FilteredPhiNModule(t, d, phi, nmat, filt)


def internal_hom(l: FilteredPhiNModule, m: FilteredPhiNModule) -> FilteredPhiNModule:
    """``Hom_K0(L, M)``; basis ordered as block (i, j) = target i, source j."""
    t = _same_tower(l, m)
    hs = HomSpace(t, K0, l.dim, m.dim)
    phi = hs.op(hs, post=m.phi, pre=l.phi.inverse())
    nmat = hs.op(hs, post=m.nmat) - hs.op(hs, pre=l.nmat)
    hk = HomSpace(t, K, l.dim, m.dim)
    filt = hom_filtration(hk, l.filt, m.filt)
    return FilteredPhiNModule(t, l.dim * m.dim, phi, nmat, filt)


def unit(tower: CoefficientTower) -> FilteredPhiNModule:
    return FilteredPhiNModule(tower, 1, tower.sigma_matrix, None, Filtration.trivial(tower, 1, 0), "unit")


def dual(m: FilteredPhiNModule) -> FilteredPhiNModule:
    return internal_hom(m, unit(m.tower))


def tate_twist(m: FilteredPhiNModule, n: int) -> FilteredPhiNModule:
    """``phi -> p^{-n} phi``, ``F^i(M(n)) = F^{i+n}(M)``, N unchanged."""
    c = to_q(m.tower.p) ** (-n)
    return FilteredPhiNModule(m.tower, m.dim, m.phi.scale(c), m.nmat, m.filt.shift(n), m.name)


def direct_sum(*ms: FilteredPhiNModule) -> FilteredPhiNModule:
    t = ms[0].tower
    for x in ms[1:]:
        _same_tower(ms[0], x)
    d = sum(x.dim for x in ms)
    phi = Matrix.diag([x.phi for x in ms])
    nmat = Matrix.diag([x.nmat for x in ms])
    filt = direct_sum_filtration([x.filt for x in ms], t)
    return FilteredPhiNModule(t, d, phi, nmat, filt)


def change_basis(m: FilteredPhiNModule, q: Matrix) -> FilteredPhiNModule:
    """New basis with ``old = Q new`` for a K0-linear invertible Q-matrix ``q``."""
    t = m.tower
    qi = q.inverse()
    # phi(Q v) = Q phi'(v); sigma is already folded into the Q-matrix phi
    phi = qi @ m.phi @ q
    nmat = qi @ m.nmat @ q
    qk = extend_matrix(t, qi)
    filt = m.filt.transform(qk)
    return FilteredPhiNModule(t, m.dim, phi, nmat, filt, m.name)


def is_morphism(f: Matrix, src: FilteredPhiNModule, tgt: FilteredPhiNModule) -> bool:
    """K0-linear Q-matrix ``f`` commuting with phi, N and preserving F."""
    if f.shape != (tgt.qdim, src.qdim):
        return False
    if f @ src.phi != tgt.phi @ f or f @ src.nmat != tgt.nmat @ f:
        return False
    return src.filt.is_preserved_by(extend_matrix(src.tower, f), tgt.filt)


def same_structure(a: FilteredPhiNModule, b: FilteredPhiNModule) -> bool:
    return (a.dim == b.dim and a.phi == b.phi and a.nmat == b.nmat and a.filt.equals(b.filt))


# sub-objects and admissibility


def closure(m: FilteredPhiNModule, vectors: Matrix) -> Matrix:
    """Smallest K0-subspace containing ``vectors`` stable under phi, phi^-1, N."""
    t = m.tower
    ops = [m.phi, m.phi.inverse(), m.nmat]
    sub = layer_span(t, K0, vectors)
    while True:
        grown = layer_span(t, K0, Matrix.hstack([sub] + [op @ sub for op in ops]))
        if grown.ncols == sub.ncols:
            return sub
        sub = grown


def is_subobject(m: FilteredPhiNModule, sub: Matrix) -> bool:
    from .restriction import is_layer_stable
    if not is_layer_stable(m.tower, K0, sub):
        return False
    return contains(sub, m.phi @ sub) and contains(sub, m.nmat @ sub) and \
        (sub.ncols == 0 or (m.phi @ sub).rank() == sub.ncols)


def sub_invariants(m: FilteredPhiNModule, sub: Matrix) -> tuple:
    """(t_H, t_N) of the sub-(phi, N)-module spanned by the columns of ``sub``."""
    t = m.tower
    sub = image(sub) if sub.ncols else sub
    if sub.ncols == 0:
        return 0, 0
    restricted = solve(sub, m.phi @ sub)
    t_n = _vp_det(t, restricted)
    sub_k = layer_span(t, K, extension_map(t, m.dim) @ sub)
    t_h = m.filt.hodge_number_on(sub_k)
    return t_h, t_n


EIGEN = "eigen"
ORACLE = "oracle"
RANDOM = "random"


class AdmissibilityError(ValueError):
    pass


@dataclass
class AdmissibilityVerdict:
    mode: str
    admissible: bool
    t_h: object
    t_n: object
    checked: int
    violation: list | None = None
    certificate: list = field(default_factory=list)
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "admissible": self.admissible,
            "t_H": str(self.t_h),
            "t_N": str(self.t_n),
            "subobjects_checked": self.checked,
            "violation": self.violation,
            "certificate": self.certificate,
            "note": self.note,
        }


def _sub_record(m: FilteredPhiNModule, sub: Matrix) -> dict:
    th, tn = sub_invariants(m, sub)
    return {"dim": sub.ncols // m.tower.f, "t_H": str(th), "t_N": str(tn)}


def _rational_eigen(m: FilteredPhiNModule) -> list:
    import sympy
    if m.tower.f != 1:
        raise AdmissibilityError("EIGEN mode needs the f=1 profile (phi linear)")
    a = sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator)) for v in row] for row in m.phi.rows])
    lam = sympy.Symbol("lam")
    poly = sympy.Poly(a.charpoly(lam).as_expr(), lam)
    _, factors = sympy.factor_list(poly.as_expr(), lam)
    roots = []
    for fac, mult in factors:
        fp = sympy.Poly(fac, lam)
        if fp.degree() != 1:
            raise AdmissibilityError("characteristic polynomial does not split over Q")
        if mult != 1:
            raise AdmissibilityError("repeated Frobenius eigenvalue")
        c1, c0 = fp.all_coeffs()
        r = -c0 / c1
        roots.append(to_q(f"{r.p}/{r.q}"))
    return roots


def admissibility(m: FilteredPhiNModule, mode: str = EIGEN, oracle: Sequence[Matrix] = (),
                  trials: int = 25, seed: int = 0, max_dim_eigen: int = 12) -> AdmissibilityVerdict:
    rep = validate(m)
    if not rep.ok:
        raise AdmissibilityError(f"invalid module: {rep.failure}")
    t_h, t_n = hodge_number(m), newton_number(m)
    verdict = AdmissibilityVerdict(mode, t_h == t_n, t_h, t_n, 0)
    if t_h != t_n:
        verdict.note = "t_H != t_N"
    subs: list[Matrix] = []
    if mode == EIGEN:
        if m.dim > max_dim_eigen:
            raise AdmissibilityError("too many eigenvector subsets to enumerate")
        roots = _rational_eigen(m)
        vecs = [kernel(m.phi - Matrix.scalar(m.qdim, r)) for r in roots]
        for size in range(1, m.dim):
            for combo in itertools.combinations(range(m.dim), size):
                sub = Matrix.hstack([vecs[i] for i in combo], m.qdim)
                if contains(sub, m.nmat @ sub):
                    subs.append(sub)
        verdict.note = verdict.note or "all phi-stable subspaces enumerated"
    elif mode == ORACLE:
        for idx, sub in enumerate(oracle):
            sub = layer_span(m.tower, K0, sub)
            if not is_subobject(m, sub):
                raise AdmissibilityError(f"oracle subspace {idx} is not a sub-(phi,N)-module")
            subs.append(sub)
    elif mode == RANDOM:
        rng = random.Random(seed)
        for _ in range(trials):
            v = [to_q(rng.randint(-3, 3)) for _ in range(m.qdim)]
            if not any(v):
                continue
            subs.append(closure(m, Matrix.from_columns([v], m.qdim)))
        # kernel of N is always a sub-object and a common witness
        if m.dim:
            subs.append(closure(m, kernel(m.nmat)) if kernel(m.nmat).ncols else Matrix.zeros(m.qdim, 0))
        verdict.note = verdict.note or f"no violation found in {trials} trials (not a proof)"
    else:
        raise AdmissibilityError(f"unknown mode {mode!r}")
    for sub in subs:
        if sub.ncols == 0 or sub.ncols == m.qdim:
            continue
        verdict.checked += 1
        th, tn = sub_invariants(m, sub)
        if th > tn:
            verdict.admissible = False
            verdict.violation = [[str(v) for v in col] for col in sub.columns()]
            verdict.note = f"subobject has t_H={th} > t_N={tn}"
            return verdict
        verdict.certificate.append(_sub_record(m, sub))
    return verdict


# helpers used by other modules


def random_invertible(tower: CoefficientTower, d: int, rng, entry_range: int = 2) -> Matrix:
    """Random invertible K0-linear Q-matrix with small integer entries."""
    while True:
        ents = [[tuple(to_q(rng.randint(-entry_range, entry_range)) for _ in range(tower.f)) for _ in range(d)]
                for _ in range(d)]
        m = layer_matrix(tower, K0, ents) if d else Matrix.zeros(0, 0)
        if d == 0 or m.det() != 0:
            return m


def zero_module(tower: CoefficientTower) -> FilteredPhiNModule:
    return FilteredPhiNModule(tower, 0, Matrix.zeros(0, 0), Matrix.zeros(0, 0), Filtration(tower, 0, 0, 0))


def scalar_module(tower: CoefficientTower, unit_factor=1, twist: int = 0) -> FilteredPhiNModule:
    """``K0(twist)`` with Frobenius ``u * p^{-twist}`` for a p-adic unit ``u``."""
    base = FilteredPhiNModule(tower, 1, tower.sigma_matrix.scale(to_q(unit_factor)), None,
                              Filtration.trivial(tower, 1, 0), "unit")
    return tate_twist(base, twist)


__all__ = [
    "FilteredPhiNModule", "ValidationReport", "validate", "newton_number", "hodge_number", "tensor",
    "internal_hom", "dual", "tate_twist", "direct_sum", "change_basis", "admissibility", "unit",
    "is_morphism", "sub_invariants", "closure", "AdmissibilityVerdict", "EIGEN", "ORACLE", "RANDOM",
    "ONE", "ZERO",
]
