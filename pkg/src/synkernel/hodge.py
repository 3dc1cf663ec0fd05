"""p-adic Hodge complexes and the Lambda complex computing their Ext groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import (
    ChainMap,
    ComplexError,
    VectorComplex,
    cohomology,
    direct_sum,
    subcomplex,
)
from .fields import K, K0, CoefficientTower
from .filtration import Filtration
from .homcomplex import HomComplex, LayerComplex
from .linalg import ZERO, Matrix, contains, image, intersect, same_span, solve, subspace_sum, to_q
from .mfcomplex import (
    MFComplex,
    ThreeColumn,
    as_complex,
    frobenius_op,
    gamma,
    monodromy_op,
)
from .modules import FilteredPhiNModule, ValidationReport, validate
from .restriction import extend_matrix, extension_map, is_layer_linear, layer_span, linear_part


class PadicHodgeComplex:
    """Three specializations on a common degree range and comparison maps.

    ``alpha[n]``: ``rig^n (x) K -> k_spec^n`` and ``beta[n]``: ``dr^n -> k_spec^n``,
    both K-linear Q-matrices.
    """

    def __init__(self, tower: CoefficientTower, rig: LayerComplex, k_spec: LayerComplex, dr: LayerComplex,
                 alpha: dict, beta: dict, name: str = ""):
        if rig.layer != K0 or k_spec.layer != K or dr.layer != K:
            raise ComplexError("specializations must live over K0, K, K")
        if rig.phi is None or rig.nmat is None:
            raise ComplexError("rigid specialization needs phi and N")
        if dr.filts is None:
            raise ComplexError("de Rham specialization needs a filtration")
        self.tower = tower
        self.rig = rig
        self.k_spec = k_spec
        self.dr = dr
        self.alpha = dict(alpha)
        self.beta = dict(beta)
        self.name = name

    def degrees(self) -> range:
        lo = min(c.lo for c in (self.rig, self.k_spec, self.dr) if c.dims) if self.any_dims() else 0
        hi = max(c.hi for c in (self.rig, self.k_spec, self.dr) if c.dims) if self.any_dims() else -1
        return range(lo, hi + 1)

    def any_dims(self) -> bool:
        return any(c.dims for c in (self.rig, self.k_spec, self.dr))

    def alpha_at(self, n: int) -> Matrix:
        m = self.alpha.get(n)
        return m if m is not None else Matrix.zeros(self.k_spec.qdim(n), self.rig.dim(n) * self.tower.e * self.tower.f)

    def beta_at(self, n: int) -> Matrix:
        m = self.beta.get(n)
        return m if m is not None else Matrix.zeros(self.k_spec.qdim(n), self.dr.qdim(n))

    def rig_k(self) -> LayerComplex:
        return self.rig.extend()

    def alpha_map(self) -> ChainMap:
        src = self.rig_k().vector_complex()
        return ChainMap(src, self.k_spec.vector_complex(), {n: self.alpha_at(n) for n in src.degrees()})

    def beta_map(self) -> ChainMap:
        src = self.dr.vector_complex()
        return ChainMap(src, self.k_spec.vector_complex(), {n: self.beta_at(n) for n in src.degrees()})

    def twist(self, n: int) -> "PadicHodgeComplex":
        c = to_q(self.tower.p) ** (-n)
        rig = LayerComplex(self.tower, K0, self.rig.lo, self.rig.dims, self.rig.diffs,
                           tuple(ph.scale(c) for ph in self.rig.phi), self.rig.nmat)
        dr = self.dr.with_filtrations([f.shift(n) for f in self.dr.filts])
        return PadicHodgeComplex(self.tower, rig, self.k_spec, dr, self.alpha, self.beta, self.name)

    def phi_invertible(self) -> bool:
        return all(self.rig.phi_at(n).ncols == 0 or self.rig.phi_at(n).det() != 0 for n in self.rig.degrees())

    def comparisons_identity(self) -> bool:
        for n in self.degrees():
            if self.rig.dim(n) != self.k_spec.dim(n) or self.rig.dim(n) != self.dr.dim(n):
                return False
            eye = Matrix.identity(self.k_spec.qdim(n))
            if self.alpha_at(n) != eye or self.beta_at(n) != eye:
                return False
        return True

    def validate(self) -> ValidationReport:
        return validate_phc(self)

    def __repr__(self) -> str:
        return (f"PadicHodgeComplex(rig={list(self.rig.dims)}, K={list(self.k_spec.dims)}, "
                f"dR={list(self.dr.dims)}, lo={self.rig.lo})")


def validate_phc(m: PadicHodgeComplex) -> ValidationReport:
    checks = []
    t = m.tower
    p = to_q(t.p)
    rig, ks, dr = m.rig, m.k_spec, m.dr

    def fail(name, detail):
        return ValidationReport(False, name, detail, checks)

    for c, nm, layer in ((rig, "rig", K0), (ks, "K", K), (dr, "dR", K)):
        for n in range(c.lo, c.hi):
            if c.d(n).shape != (c.qdim(n + 1), c.qdim(n)):
                return fail("shape", f"{nm} differential in degree {n}")
            if not is_layer_linear(t, layer, c.d(n)):
                return fail("linearity", f"{nm} differential in degree {n}")
        vc = c.vector_complex()
        if not vc.is_complex():
            return fail("d-squared", f"{nm} specialization")
    checks.append("complexes")
    for n in rig.degrees():
        ph, nn = rig.phi_at(n), rig.n_at(n)
        if ph.shape != (rig.qdim(n), rig.qdim(n)) or nn.shape != ph.shape:
            return fail("shape", f"phi/N in degree {n}")
        if rig.dim(n) and not is_layer_linear(t, K0, linear_part(t, ph)):
            return fail("phi-sigma-semilinear", f"degree {n}")
        if not is_layer_linear(t, K0, nn):
            return fail("N-K0-linear", f"degree {n}")
        if nn @ ph != (ph @ nn).scale(p):
            return fail("N-phi=p-phi-N", f"degree {n}")
        if rig.dim(n) and not nn.power(rig.dim(n)).is_zero():
            return fail("N-nilpotent", f"degree {n}")
        if n < rig.hi:
            d = rig.d(n)
            if d @ ph != rig.phi_at(n + 1) @ d:
                return fail("phi-chain-map", f"degree {n}")
            if d @ nn != rig.n_at(n + 1) @ d:
                return fail("N-chain-map", f"degree {n}")
    checks.append("rigid-structure")
    for n in dr.degrees():
        f = dr.filt_at(n)
        if f.dim != dr.dim(n) or not f.is_valid():
            return fail("filtration-well-formed", f"degree {n}")
        if n < dr.hi and not f.is_preserved_by(dr.d(n), dr.filt_at(n + 1)):
            return fail("d-preserves-F", f"degree {n}")
    checks.append("de-rham-filtration")
    for nm, cm in (("alpha", m.alpha_map()), ("beta", m.beta_map())):
        for n, mat in cm.maps.items():
            if mat.shape != (cm.tgt.dim(n), cm.src.dim(n)):
                return fail("shape", f"{nm} in degree {n}")
            if not is_layer_linear(t, K, mat):
                return fail("linearity", f"{nm} in degree {n}")
        if not cm.is_chain_map():
            return fail(f"{nm}-chain-map", "comparison map does not commute with d")
    checks.append("comparison-maps")
    return ValidationReport(True, None, "", checks)


def theta_embed(l: MFComplex | FilteredPhiNModule) -> PadicHodgeComplex:
    l = as_complex(l)
    rig = l.rig()
    ks = rig.extend()
    dr = l.dr()
    eye = {n: Matrix.identity(ks.qdim(n)) for n in ks.degrees()}
    return PadicHodgeComplex(l.tower, rig, ks, dr, eye, dict(eye), l.name)


def phc_direct_sum(*ms: PadicHodgeComplex) -> PadicHodgeComplex:
    t = ms[0].tower
    degs = set()
    for m in ms:
        degs |= set(m.degrees())
    lo, hi = min(degs), max(degs)

    def lsum(parts: list[LayerComplex], layer: str) -> LayerComplex:
        dims = tuple(sum(c.dim(n) for c in parts) for n in range(lo, hi + 1))
        diffs = tuple(Matrix.diag([c.d(n) for c in parts]) for n in range(lo, hi))
        phi = nmat = filts = None
        if layer == K0:
            phi = tuple(Matrix.diag([c.phi_at(n) if c.dim(n) else Matrix.zeros(0, 0) for c in parts])
                        for n in range(lo, hi + 1))
            nmat = tuple(Matrix.diag([c.n_at(n) if c.dim(n) else Matrix.zeros(0, 0) for c in parts])
                         for n in range(lo, hi + 1))
        if parts[0].filts is not None:
            from .filtration import direct_sum_filtration
            filts = tuple(direct_sum_filtration([c.filt_at(n) for c in parts], t) for n in range(lo, hi + 1))
        return LayerComplex(t, layer, lo, dims, diffs, phi, nmat, filts)

    rig = lsum([m.rig for m in ms], K0)
    ks = lsum([m.k_spec for m in ms], K)
    dr = lsum([m.dr for m in ms], K)
    alpha = {n: Matrix.diag([m.alpha_at(n) for m in ms]) for n in range(lo, hi + 1)}
    beta = {n: Matrix.diag([m.beta_at(n) for m in ms]) for n in range(lo, hi + 1)}
    return PadicHodgeComplex(t, rig, ks, dr, alpha, beta)


# Lambda


@dataclass
class LambdaData(ThreeColumn):
    hom_rig: HomComplex | None = None
    hom_k: HomComplex | None = None
    hom_dr: HomComplex | None = None
    f0: VectorComplex | None = None
    f0_inc: ChainMap | None = None


def lambda_data(l: PadicHodgeComplex, m: PadicHodgeComplex, check: bool = True) -> LambdaData:
    if not l.phi_invertible():
        raise ComplexError("Frobenius on the source rigid specialization must be invertible")
    if check:
        for x, nm in ((l, "L"), (m, "M")):
            rep = validate_phc(x)
            if not rep.ok:
                raise ComplexError(f"invalid p-adic Hodge complex {nm}: {rep.failure} ({rep.detail})")
    p = to_q(l.tower.p)
    hr = HomComplex(l.rig, m.rig)
    hk = HomComplex(l.k_spec, m.k_spec)
    hd = HomComplex(l.dr, m.dr)
    f0, f0_inc = hd.filtration_subcomplex(0)
    lrk = l.rig.extend()
    h_rk_mk = HomComplex(lrk, m.k_spec)
    h_dr_mk = HomComplex(l.dr, m.k_spec)
    h_rk_rk = HomComplex(lrk, m.rig.extend())
    phi_h = frobenius_op(hr, l.rig, m.rig)
    n_h = monodromy_op(hr, l.rig, m.rig)
    # x -> alpha_M x_K, y -> y alpha_L, y -> y beta_L, z -> beta_M z
    ext = hr.ext_to(h_rk_rk)
    a_post = h_rk_rk.degreewise(h_rk_mk, post=m.alpha_at)
    x_to_3 = a_post.compose(ext)
    y_to_3 = hk.degreewise(h_rk_mk, pre=l.alpha_at)
    y_to_4 = hk.degreewise(h_dr_mk, pre=l.beta_at)
    z_to_4 = hd.degreewise(h_dr_mk, post=m.beta_at).compose(f0_inc)
    hv = hr.vc
    A = direct_sum(hv, hk.vc, f0)
    B = direct_sum(hv, hv, h_rk_mk.vc, h_dr_mk.vc)
    C = hv
    phis, psis = {}, {}
    for n in A.degrees():
        dh, dk, df = hv.dim(n), hk.vc.dim(n), f0.dim(n)
        d3, d4 = h_rk_mk.vc.dim(n), h_dr_mk.vc.dim(n)
        eye = Matrix.identity(dh)
        phis[n] = Matrix.block([
            [n_h.at(n), None, None],
            [eye - phi_h.at(n), None, None],
            [x_to_3.at(n), y_to_3.at(n).scale(-1), None],
            [None, y_to_4.at(n), z_to_4.at(n).scale(-1)],
        ], [dh, dh, d3, d4], [dh, dk, df])
    for n in B.degrees():
        dh = hv.dim(n)
        eye = Matrix.identity(dh)
        psis[n] = Matrix.block([[eye - phi_h.at(n).scale(p), n_h.at(n).scale(-1), None, None]], [dh],
                               [dh, dh, h_rk_mk.vc.dim(n), h_dr_mk.vc.dim(n)])
    out = LambdaData(A, B, C, ChainMap(A, B, phis), ChainMap(B, C, psis),
                     labels={"A": ["x", "y", "z"], "B": ["x", "y", "z", "w"], "C": ["x"]},
                     hom_rig=hr, hom_k=hk, hom_dr=hd, f0=f0, f0_inc=f0_inc)
    if check:
        out.check()
    return out


def ext_phc(l: PadicHodgeComplex, m: PadicHodgeComplex, degrees: Sequence[int] | None = None,
            require_identity: bool = True) -> list[int]:
    if require_identity and not l.comparisons_identity():
        raise ComplexError("source comparison maps must be identities")
    data = lambda_data(l, m)
    if degrees is None:
        degs = m.degrees()
        ldeg = l.degrees()
        degrees = range(degs.start - (ldeg.stop - 1), (degs.stop - 1) - ldeg.start + 3)
    return data.total.betti(list(degrees))


def three_column_map(src: ThreeColumn, tgt: ThreeColumn, fa: ChainMap, fb: ChainMap, fc: ChainMap) -> ChainMap:
    """Map of total complexes induced by compatible maps of the three columns."""
    s, t = src.total, tgt.total
    maps = {}
    for k in s.degrees():
        maps[k] = Matrix.diag([fc.at(k - 2), fb.at(k - 1), fa.at(k)])
        if maps[k].shape != (t.dim(k), s.dim(k)):
            raise ComplexError("column maps do not match the total layout")
    return ChainMap(s, t, maps)


def gamma_to_lambda(l: MFComplex, m: MFComplex) -> tuple[ChainMap, object, LambdaData]:
    """``(x, y) -> (x, x_K, y)``, ``(a, b, c) -> (a, b, 0, -c)``, identity on C."""
    l, m = as_complex(l), as_complex(m)
    g = gamma(l, m)
    lam = lambda_data(theta_embed(l), theta_embed(m))
    fa, fb, fc = {}, {}, {}
    for n in g.A.degrees():
        dh, df = g.hom.vc.dim(n), g.f0.dim(n)
        fa[n] = Matrix.block([[Matrix.identity(dh), None], [g.ext.at(n), None], [None, Matrix.identity(df)]],
                             [dh, g.hom_k.vc.dim(n), df], [dh, df])
    for n in g.B.degrees():
        dh, dk = g.hom.vc.dim(n), g.hom_k.vc.dim(n)
        fb[n] = Matrix.block([[Matrix.identity(dh), None, None], [None, Matrix.identity(dh), None],
                              [None, None, None], [None, None, Matrix.identity(dk).scale(-1)]],
                             [dh, dh, dk, dk], [dh, dh, dk])
    for n in g.C.degrees():
        fc[n] = Matrix.identity(g.C.dim(n))
    chain = three_column_map(g, lam, ChainMap(g.A, lam.A, fa), ChainMap(g.B, lam.B, fb), ChainMap(g.C, lam.C, fc))
    return chain, g, lam


# strictness, (HK) surrogate, cohomology objects


def strictness_check(m: PadicHodgeComplex) -> bool:
    dr = m.dr
    for n in range(dr.lo, dr.hi):
        d = dr.d(n)
        img = image(d) if d.ncols else Matrix.zeros(d.nrows, 0)
        f_src, f_tgt = dr.filt_at(n), dr.filt_at(n + 1)
        lo = min(f_src.lo, f_tgt.lo)
        hi = max(f_src.hi, f_tgt.hi)
        for j in range(lo, hi + 1):
            fs = f_src.F(j)
            left = image(d @ fs) if fs.ncols else Matrix.zeros(d.nrows, 0)
            right = intersect(img, f_tgt.F(j))
            if not same_span(left, right):
                return False
    return True


def is_hk(m: PadicHodgeComplex) -> bool:
    """Both comparison maps are quasi-isomorphisms (stand-in for the (HK) condition)."""
    return m.alpha_map().is_quasi_isomorphism() and m.beta_map().is_quasi_isomorphism()


def _adapted_basis(tower: CoefficientTower, layer: str, cocycles: Matrix, boundaries: Matrix) -> Matrix:
    """Vectors ``v_i`` whose layer-multiples complete ``boundaries`` to a basis of ``cocycles``."""
    deg = tower.deg(layer)
    span = boundaries
    chosen = []
    for col in cocycles.columns():
        v = Matrix.from_columns([col], cocycles.nrows)
        block = layer_span(tower, layer, v)
        trial = subspace_sum(span, block)
        if trial.ncols == span.ncols + deg:
            chosen.append(col)
            span = trial
    return Matrix.from_columns(chosen, cocycles.nrows)


def _layered(tower: CoefficientTower, layer: str, vs: Matrix) -> Matrix:
    """Columns ``x^k v_i`` in the layer coordinate order ``i * deg + k``."""
    deg = tower.deg(layer)
    if vs.ncols == 0:
        return vs
    d = vs.nrows // deg
    mults = [Matrix.diag([mm] * d) for mm in tower.basis_mults(layer)]
    cols = []
    for col in vs.columns():
        for mm in mults:
            cols.append(mm @ col)
    return Matrix.from_columns(cols, vs.nrows)


@dataclass
class CohomologyModuleResult:
    module: FilteredPhiNModule | None
    ok: bool
    reason: str = ""
    basis: Matrix | None = None  # layered cocycle basis of H^i(rig)


def cohomology_module(m: PadicHodgeComplex, i: int, check: bool = True) -> CohomologyModuleResult:
    """``H^i(rig)`` with induced phi, N and the filtration pulled back from ``H^i(dR)``."""
    if check:
        if not is_hk(m):
            return CohomologyModuleResult(None, False, "comparison maps are not quasi-isomorphisms")
        if not strictness_check(m):
            return CohomologyModuleResult(None, False, "de Rham specialization is not strict")
    t = m.tower
    rvc = m.rig.vector_complex()
    h = cohomology(rvc, i)
    vs = _adapted_basis(t, K0, h.cocycles, h.coboundaries)
    w = _layered(t, K0, vs)
    dim = vs.ncols
    if dim == 0:
        from .modules import zero_module
        return CohomologyModuleResult(zero_module(t), True, "", w)
    basis = Matrix.hstack([h.coboundaries, w])
    nb = h.coboundaries.ncols

    def coords(vecs: Matrix) -> Matrix:
        x = solve(basis, vecs)
        return x.submatrix(nb, nb + w.ncols, 0, x.ncols)

    phi = coords(m.rig.phi_at(i) @ w)
    nmat = coords(m.rig.n_at(i) @ w)
    # filtration through H(alpha)^{-1} H(beta)
    wk = _layered(t, K, extension_map(t, m.rig.dim(i)) @ vs)
    hk = cohomology(m.k_spec.vector_complex(), i)
    a_cls = hk.classify(m.alpha_at(i) @ wk)
    hdr = cohomology(m.dr.vector_complex(), i)
    f = m.dr.filt_at(i)
    qk = dim * t.deg(K)
    steps = {}
    for j in range(f.lo + 1, f.hi):
        zf = intersect(f.F(j), hdr.cocycles)
        if zf.ncols == 0:
            steps[j] = Matrix.zeros(qk, 0)
            continue
        b_cls = hk.classify(m.beta_at(i) @ zf)
        x = solve(a_cls, b_cls)
        if x is None:
            return CohomologyModuleResult(None, False, "filtration does not transport")
        steps[j] = image(x)
    filt = Filtration(t, dim, f.lo, f.hi, steps) if f.dim else Filtration.trivial(t, dim, 0)
    mod = FilteredPhiNModule(t, dim, phi, nmat, filt)
    return CohomologyModuleResult(mod, True, "", w)


def truncation_bases(m: PadicHodgeComplex, q: int) -> dict:
    """Per-specialization degree bases of the canonical truncation ``tau_{<=q}``."""
    out = {}
    for key, c in (("rig", m.rig), ("K", m.k_spec), ("dR", m.dr)):
        vc = c.vector_complex()
        table = {}
        for n in vc.degrees():
            dim = vc.dim(n)
            if n < q:
                table[n] = Matrix.identity(dim)
            elif n == q:
                from .linalg import kernel
                table[n] = kernel(vc.d(n)) if dim else Matrix.zeros(0, 0)
            else:
                table[n] = Matrix.zeros(dim, 0)
        out[key] = table
    return out


# Lambda_0 and the comparison with Lambda(K0, -)


@dataclass
class Lambda0Data(ThreeColumn):
    phc: PadicHodgeComplex | None = None
    f0: VectorComplex | None = None
    f0_inc: ChainMap | None = None


def lambda0(m: PadicHodgeComplex, check: bool = True) -> Lambda0Data:
    """``A0 = rig (+) F^0 dR``, ``B0 = rig (+) rig (+) K``, ``C0 = rig``; total is
    ``Cone(Cone Phi0 -> C0)[-2]``."""
    if check:
        rep = validate_phc(m)
        if not rep.ok:
            raise ComplexError(f"invalid p-adic Hodge complex: {rep.failure} ({rep.detail})")
    t = m.tower
    p = to_q(t.p)
    rv = m.rig.vector_complex()
    kv = m.k_spec.vector_complex()
    dv = m.dr.vector_complex()
    f0_bases = {n: m.dr.filt_at(n).F(0) for n in dv.degrees()}
    f0, f0_inc = subcomplex(dv, f0_bases)
    A = direct_sum(rv, f0)
    B = direct_sum(rv, rv, kv)
    C = rv
    phis, psis = {}, {}
    for n in A.degrees():
        dr_, df, dk = rv.dim(n), f0.dim(n), kv.dim(n)
        eye = Matrix.identity(dr_)
        ext = extension_map(t, m.rig.dim(n))
        phi = m.rig.phi_at(n) if dr_ else Matrix.zeros(0, 0)
        nn = m.rig.n_at(n) if dr_ else Matrix.zeros(0, 0)
        phis[n] = Matrix.block([[nn, None], [eye - phi, None],
                                [m.alpha_at(n) @ ext if dr_ else None, (m.beta_at(n) @ f0_inc.at(n)).scale(-1)]],
                               [dr_, dr_, dk], [dr_, df])
    for n in B.degrees():
        dr_, dk = rv.dim(n), kv.dim(n)
        eye = Matrix.identity(dr_)
        phi = m.rig.phi_at(n) if dr_ else Matrix.zeros(0, 0)
        nn = m.rig.n_at(n) if dr_ else Matrix.zeros(0, 0)
        psis[n] = Matrix.block([[eye - phi.scale(p), nn.scale(-1), None]], [dr_], [dr_, dr_, dk])
    out = Lambda0Data(A, B, C, ChainMap(A, B, phis), ChainMap(B, C, psis),
                      labels={"A": ["x", "y"], "B": ["x", "y", "z"], "C": ["x"]},
                      phc=m, f0=f0, f0_inc=f0_inc)
    if check:
        out.check()
    return out


def _hom_sign(n: int) -> int:
    return -1 if (n * (n + 1) // 2) % 2 else 1


def remark_map(m: PadicHodgeComplex) -> tuple[ChainMap, LambdaData, Lambda0Data]:
    """``(x, y, z) -> (x, z)``, ``(x, y, z, w) -> (x, y, z + w)``, ``x -> x``.

    ``Hom(K0, M)^n`` carries ``(-1)^{n+1} d_M``, so every component in degree n
    is scaled by ``(-1)^{n(n+1)/2}`` to match the differential of M.
    """
    from .modules import unit
    u = theta_embed(unit(m.tower))
    lam = lambda_data(u, m)
    lam0 = lambda0(m)
    fa, fb, fc = {}, {}, {}
    for n in lam.A.degrees():
        dh, dk, df = lam.hom_rig.vc.dim(n), lam.hom_k.vc.dim(n), lam.f0.dim(n)
        # Hom(K0, V) = V on coordinates; F^0 parts need a change of basis
        f0_vecs = lam.f0_inc.at(n)
        z = solve(lam0.f0_inc.at(n), f0_vecs) if df else Matrix.zeros(lam0.f0.dim(n), 0)
        if z is None:
            raise ComplexError("F^0 parts do not match")
        fa[n] = Matrix.block([[Matrix.identity(dh), None, None], [None, None, z]],
                             [dh, lam0.f0.dim(n)], [dh, dk, df]).scale(_hom_sign(n))
    for n in lam.B.degrees():
        dh = lam.hom_rig.vc.dim(n)
        dk = lam0.B.dim(n) - 2 * dh
        eye_k = Matrix.identity(dk)
        fb[n] = Matrix.block([[Matrix.identity(dh), None, None, None], [None, Matrix.identity(dh), None, None],
                              [None, None, eye_k, eye_k]], [dh, dh, dk], [dh, dh, dk, dk]).scale(_hom_sign(n))
    for n in lam.C.degrees():
        fc[n] = Matrix.identity(lam.C.dim(n)).scale(_hom_sign(n))
    chain = three_column_map(lam, lam0, ChainMap(lam.A, lam0.A, fa), ChainMap(lam.B, lam0.B, fb),
                             ChainMap(lam.C, lam0.C, fc))
    return chain, lam, lam0
