"""Syntomic cohomology of p-adic Hodge complexes and its structural properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complexes import (
    ChainMap,
    ComplexError,
    DoubleComplex,
    FilteredVectorComplex,
    VectorComplex,
    cohomology,
    cone,
    cone_inclusion,
    cone_projection,
    shift,
    spectral_sequence,
    subcomplex,
    total_complex,
)
from .hodge import (
    Lambda0Data,
    PadicHodgeComplex,
    cohomology_module,
    is_hk,
    lambda0,
    strictness_check,
    truncation_bases,
    validate_phc,
)
from .linalg import Matrix, intersect, solve, to_q
from .mfcomplex import MFComplex, ext_groups
from .modules import FilteredPhiNModule, direct_sum as module_sum, is_morphism, unit, zero_module


class SyntomicError(ValueError):
    pass


def _check(m: PadicHodgeComplex) -> None:
    rep = validate_phc(m)
    if not rep.ok:
        raise SyntomicError(f"invalid p-adic Hodge complex: {rep.failure} ({rep.detail})")


def syn_range(m: PadicHodgeComplex) -> list[int]:
    degs = m.degrees()
    return list(range(degs.start, degs.stop + 2))


@dataclass
class SynReport:
    twist: int
    degrees: list
    H_syn: list
    H_A: list
    H_B: list
    H_C: list
    H_alpha: list
    H_beta: list
    reps: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "twist": self.twist, "degrees": self.degrees, "H_syn": self.H_syn, "H_A": self.H_A,
            "H_B": self.H_B, "H_C": self.H_C, "H_alpha": self.H_alpha, "H_beta": self.H_beta,
            "representatives": {str(k): [[str(x) for x in v] for v in vs] for k, vs in self.reps.items()},
        }


def syn_data(m: PadicHodgeComplex, n: int) -> Lambda0Data:
    _check(m)
    return lambda0(m.twist(n))


def syn_cohomology(m: PadicHodgeComplex, n: int, degrees: Sequence[int] | None = None) -> SynReport:
    """``H^i_syn = H^i(Lambda_0(m(n))[-2])`` with the auxiliary groups."""
    data = syn_data(m, n)
    degs = list(degrees) if degrees is not None else syn_range(m)
    tot = data.total
    reps = {}
    h_syn = []
    for k in degs:
        h = cohomology(tot, k)
        h_syn.append(h.dim)
        reps[k] = h.reps.columns()
    return SynReport(
        n, degs, h_syn,
        data.A.betti(degs), data.B.betti(degs), data.C.betti(degs),
        data.cone_phi.betti(degs), cone(data.psi).betti(degs), reps,
    )


# long exact sequences


@dataclass
class LESNode:
    sequence: str
    node: str
    degree: int
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.rank_in + self.rank_out == self.dim

    def as_dict(self) -> dict:
        return {"sequence": self.sequence, "node": self.node, "degree": self.degree, "dim": self.dim,
                "rank_in": self.rank_in, "rank_out": self.rank_out, "exact": self.exact}


@dataclass
class LESReport:
    twist: int
    nodes: list
    error: str | None = None
    identifications: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None and all(nd.exact for nd in self.nodes) and all(self.identifications.values())

    def failures(self) -> list:
        return [nd.as_dict() for nd in self.nodes if not nd.exact]

    def as_dict(self) -> dict:
        return {"twist": self.twist, "exact": self.ok, "nodes": len(self.nodes), "failures": self.failures(),
                "identifications": self.identifications, "error": self.error}


def _induced(maps: dict, src: VectorComplex, tgt: VectorComplex, n: int, tdeg: int) -> Matrix:
    """Matrix of the map ``H^n(src) -> H^tdeg(tgt)`` given degree-n components."""
    hs = cohomology(src, n)
    ht = cohomology(tgt, tdeg)
    if hs.dim == 0 or ht.dim == 0:
        return Matrix.zeros(ht.dim, hs.dim)
    return ht.classify(maps[n] @ hs.reps)


def _triangle(name: str, u: ChainMap, labels: tuple, degrees: Sequence[int]) -> list[LESNode]:
    """Exactness of ``H^i X -> H^i Y -> H^i Cone u -> H^{i+1} X`` at every node."""
    x, y = u.src, u.tgt
    c = cone(u)
    inc = cone_inclusion(u, c)
    prj = cone_projection(u, c)
    u_maps = {n: u.at(n) for n in range(min(degrees) - 1, max(degrees) + 3)}
    i_maps = {n: inc.at(n) for n in range(min(degrees) - 1, max(degrees) + 3)}
    p_maps = {n: prj.at(n) for n in range(min(degrees) - 1, max(degrees) + 3)}
    lx, ly, lc = labels
    out = []

    def uh(n):
        return _induced(u_maps, x, y, n, n)

    def ih(n):
        return _induced(i_maps, y, c, n, n)

    def ph(n):
        # projection lands in X[1]^n = X^{n+1}; classify in X directly
        hs = cohomology(c, n)
        ht = cohomology(x, n + 1)
        if hs.dim == 0 or ht.dim == 0:
            return Matrix.zeros(ht.dim, hs.dim)
        return ht.classify(p_maps[n] @ hs.reps)

    for n in degrees:
        a, b = uh(n), ih(n)
        out.append(LESNode(name, ly, n, cohomology(y, n).dim, a.rank(), b.rank(), (b @ a).is_zero()))
        a2, b2 = ih(n), ph(n)
        out.append(LESNode(name, lc, n, cohomology(c, n).dim, a2.rank(), b2.rank(), (b2 @ a2).is_zero()))
        a3, b3 = ph(n), uh(n + 1)
        out.append(LESNode(name, lx, n + 1, cohomology(x, n + 1).dim, a3.rank(), b3.rank(), (b3 @ a3).is_zero()))
    return out


def les_check(m: PadicHodgeComplex, n: int, degrees: Sequence[int] | None = None) -> LESReport:
    """Exactness at every node of the four sequences built from the cone triangles."""
    try:
        data = syn_data(m, n)
        tot = data.total
        degs = list(degrees) if degrees is not None else list(range(m.degrees().start - 3, m.degrees().stop + 2))
        nodes = []
        nodes += _triangle("cone-Phi0", data.phi, ("H_A", "H_B", "H_alpha"), degs)
        nodes += _triangle("cone-Psi0", data.psi, ("H_B", "H_C", "H_beta"), degs)
        nodes += _triangle("cone-Phi0->C0", data.cone_to_c(), ("H_alpha", "H_C", "H_syn[+2]"), degs)
        # A0[1] -> Cone Psi0, a -> (0, Phi0 a); its cone has the shape of Lambda_0
        cpsi = cone(data.psi)
        a1 = shift(data.A, 1)
        maps = {}
        for k in a1.degrees():
            top = Matrix.zeros(data.C.dim(k), data.A.dim(k + 1))
            maps[k] = Matrix.vstack([top, data.phi.at(k + 1)], data.A.dim(k + 1))
        j = ChainMap(a1, cpsi, maps)
        nodes += _triangle("A0[1]->cone-Psi0", j, ("H_A[+1]", "H_beta", "H_syn[+2]"), degs)
        cj = cone(j)
        ident = {
            "cone(Cone Phi0 -> C0) = Lambda_0": all(cone(data.cone_to_c()).betti([k])[0] == tot.betti([k + 2])[0]
                                                     for k in degs),
            "cone(A0[1] -> Cone Psi0) = Lambda_0": all(cj.betti([k])[0] == tot.betti([k + 2])[0] for k in degs),
        }
        return LESReport(n, nodes, None, ident)
    except ComplexError as exc:
        return LESReport(n, [], str(exc))


# Leray spectral sequence


@dataclass
class LerayReport:
    twist: int
    e2: dict  # (i, j) -> dim
    e3: dict
    ext_e2: dict  # (i, j) -> dim Ext^i(K0, H^j)
    h_syn: dict  # k -> dim
    e2_agrees: bool
    degenerates: bool
    converges: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.e2_agrees and self.degenerates and self.converges

    def as_dict(self) -> dict:
        fmt = lambda d: {f"{i},{j}": v for (i, j), v in sorted(d.items()) if v}
        return {"twist": self.twist, "E2": fmt(self.e2), "E3": fmt(self.e3), "Ext": fmt(self.ext_e2),
                "H_syn": {str(k): v for k, v in sorted(self.h_syn.items())}, "E2_agrees": self.e2_agrees,
                "degenerates": self.degenerates, "converges": self.converges, "ok": self.ok, "error": self.error}


def truncation_filtration(m: PadicHodgeComplex, n: int) -> tuple[FilteredVectorComplex, Lambda0Data]:
    """``Lambda_0(m(n))[-2]`` filtered by ``F^p = Lambda_0(tau_{<= -p} m(n))[-2]``."""
    mt = m.twist(n)
    data = lambda0(mt)
    tot = data.total
    degs = mt.degrees()
    lo_m, hi_m = degs.start, degs.stop - 1
    steps = {}
    for p in range(-hi_m + 1, -lo_m + 1):
        tb = truncation_bases(mt, -p)
        rig, ks, dr = tb["rig"], tb["K"], tb["dR"]

        def part(table, k, dim):
            return table.get(k, Matrix.zeros(dim, 0))

        for k in tot.degrees():
            c = part(rig, k - 2, data.C.dim(k - 2))
            r1 = part(rig, k - 1, mt.rig.qdim(k - 1))
            kk = part(ks, k - 1, mt.k_spec.qdim(k - 1))
            ra = part(rig, k, mt.rig.qdim(k))
            fa = Matrix.zeros(data.f0.dim(k), 0)
            if data.f0.dim(k):
                inc = data.f0_inc.at(k)
                meet = intersect(inc, part(dr, k, mt.dr.qdim(k)))
                fa = solve(inc, meet) if meet.ncols else Matrix.zeros(data.f0.dim(k), 0)
            steps[(p, k)] = Matrix.diag([c, r1, r1, kk, ra, fa])
    fc = FilteredVectorComplex(tot, steps, -hi_m, -lo_m)
    fc.check()
    return fc, data


def leray(m: PadicHodgeComplex, n: int, check: bool = True) -> LerayReport:
    _check(m)
    mt = m.twist(n)
    if check and not (is_hk(mt) and strictness_check(mt)):
        return LerayReport(n, {}, {}, {}, {}, False, False, False, "input is not strict with (HK) comparisons")
    fc, data = truncation_filtration(m, n)
    pages = spectral_sequence(fc)
    # Leray E_{r+1}^{i,j} = canonical E_r^{p,q} with i = 2p + q, j = -p
    def relabel(page):
        return {(2 * p + q, -p): v for (p, q), v in page.dims.items()}

    e2 = relabel(pages[0])
    e3 = relabel(pages[1]) if len(pages) > 1 else dict(e2)
    degenerates = all(v == 0 for pg in pages[1:] for v in pg.ranks.values())
    h_syn = {k: data.total.betti([k])[0] for k in data.total.degrees()}
    converges = all(sum(v for (i, j), v in e3.items() if i + j == k) == h_syn[k] for k in h_syn)
    ext_e2 = {}
    agrees = True
    u = unit(m.tower)
    for j in mt.degrees():
        res = cohomology_module(mt, j, check=False)
        if not res.ok:
            agrees = False
            continue
        dims = ext_groups(u, res.module, degrees=[0, 1, 2]).dims if res.module.dim else [0, 0, 0]
        for i, d in enumerate(dims):
            ext_e2[(i, j)] = d
    for (i, j), v in e2.items():
        if v != ext_e2.get((i, j), 0):
            agrees = False
    for (i, j), v in ext_e2.items():
        if v != e2.get((i, j), 0):
            agrees = False
    return LerayReport(n, e2, e3, ext_e2, h_syn, agrees, degenerates, converges)


# smooth case splitting


@dataclass
class SplitReport:
    twist: int
    degrees: list
    H_syn: list
    H_tilde: list
    H_cone: list  # H^{i-2}(Cone(1 - phi / p^{n-1}))
    dimension_identity: bool
    direct_sum: bool
    twist_identity: bool

    @property
    def ok(self) -> bool:
        return self.dimension_identity and self.direct_sum and self.twist_identity

    def as_dict(self) -> dict:
        return {"twist": self.twist, "degrees": self.degrees, "H_syn": self.H_syn, "H_tilde": self.H_tilde,
                "H_cone": self.H_cone, "dimension_identity": self.dimension_identity,
                "direct_sum": self.direct_sum, "twist_identity": self.twist_identity, "ok": self.ok}


def smooth_split(m: PadicHodgeComplex, n: int, degrees: Sequence[int] | None = None) -> SplitReport:
    """Split ``Lambda_0`` into the two-column complex and the shifted cone of ``1 - p phi``."""
    _check(m)
    if any(not m.rig.n_at(k).is_zero() for k in m.rig.degrees() if m.rig.qdim(k)):
        raise SyntomicError("monodromy must vanish on the rigid specialization")
    data = lambda0(m.twist(n))
    tot = data.total
    degs = list(degrees) if degrees is not None else syn_range(m)
    p = to_q(m.tower.p)
    # sub (first B-coordinate + C) and complement (A + last two B-coordinates)
    sub_b, rest_b = {}, {}
    for k in tot.degrees():
        lay = data.layout(k)
        r = m.rig.qdim(k - 1)
        kq = m.k_spec.qdim(k - 1)
        c0, c1 = lay["C"]
        b0, b1 = lay["B"]
        a0, a1 = lay["A"]
        size = tot.dim(k)
        cols_sub = list(range(c0, c1)) + list(range(b0, b0 + r))
        cols_rest = list(range(b0 + r, b1)) + list(range(a0, a1))
        eye = Matrix.identity(size)
        sub_b[k] = eye.select_columns(cols_sub)
        rest_b[k] = eye.select_columns(cols_rest)
        assert b1 - b0 == 2 * r + kq
    try:
        sub, _ = subcomplex(tot, sub_b)
        rest, _ = subcomplex(tot, rest_b)
        is_sum = True
    except ComplexError:
        is_sum = False
        sub = rest = None
    # 1 - p phi_twisted, compared with 1 - phi / p^{n-1} on the untwisted Frobenius
    twist_ok = True
    mt = m.twist(n)
    for k in m.rig.degrees():
        if not m.rig.qdim(k):
            continue
        eye = Matrix.identity(m.rig.qdim(k))
        lhs = eye - mt.rig.phi_at(k).scale(p)
        rhs = eye - m.rig.phi_at(k).scale(p ** (1 - n))
        twist_ok = twist_ok and lhs == rhs
    rv = m.rig.vector_complex()
    one_minus = ChainMap(rv, rv, {k: Matrix.identity(rv.dim(k)) - m.rig.phi_at(k).scale(p ** (1 - n))
                                  for k in rv.degrees()})
    cone_c = cone(one_minus)
    h_syn = tot.betti(degs)
    h_cone = [cone_c.betti([i - 2])[0] for i in degs]
    if is_sum:
        h_tilde = rest.betti(degs)
        sub_dims = sub.betti(degs)
        is_sum = is_sum and sub_dims == h_cone
    else:
        h_tilde = [0] * len(degs)
    ident = all(a == b + c for a, b, c in zip(h_syn, h_tilde, h_cone))
    return SplitReport(n, degs, h_syn, h_tilde, h_cone, ident, is_sum, twist_ok)


# simplicial totalization


@dataclass
class MFDoubleComplex:
    """Modules at (col, row); horizontal maps raise col, vertical maps raise row."""

    modules: dict
    horizontal: dict = field(default_factory=dict)
    vertical: dict = field(default_factory=dict)


def simplicial_total(dc: MFDoubleComplex, tower=None) -> MFComplex:
    cells = [k for k, v in dc.modules.items() if v is not None and v.dim]
    if not cells:
        if tower is None:
            raise ComplexError("empty double complex")
        return MFComplex(tower, 0, [zero_module(tower)])
    tower = dc.modules[cells[0]].tower
    for key, mat in list(dc.horizontal.items()) + list(dc.vertical.items()):
        if key not in dc.modules:
            raise ComplexError(f"map from missing cell {key}")
    for (a, b), mat in dc.horizontal.items():
        src, tgt = dc.modules.get((a, b)), dc.modules.get((a + 1, b))
        if tgt is None or not is_morphism(mat, src, tgt):
            raise ComplexError(f"horizontal map at {(a, b)} is not a morphism")
    for (a, b), mat in dc.vertical.items():
        src, tgt = dc.modules.get((a, b)), dc.modules.get((a, b + 1))
        if tgt is None or not is_morphism(mat, src, tgt):
            raise ComplexError(f"vertical map at {(a, b)} is not a morphism")
    vdc = DoubleComplex({k: v.qdim for k, v in dc.modules.items() if v is not None},
                        dict(dc.horizontal), dict(dc.vertical))
    tot, offsets = total_complex(vdc)
    mods = []
    for k in tot.degrees():
        parts = sorted(c for c in cells if c[0] + c[1] == k)
        mods.append(module_sum(*[dc.modules[c] for c in parts]) if parts else zero_module(tower))
    diffs = [tot.d(k) for k in range(tot.lo, tot.hi)]
    out = MFComplex(tower, tot.lo, mods, diffs, "total")
    rep = out.validate()
    if not rep.ok:
        raise ComplexError(f"total complex is not a complex of modules: {rep.failure}")
    return out
