"""Complexes of filtered (phi, N)-modules and Ext groups via the Gamma complex."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complexes import (
    ChainMap,
    ComplexError,
    VectorComplex,
    cohomology,
    cone,
    direct_sum,
    kernel_complex,
    quotient_complex,
    shift,
    subcomplex,
)
from .fields import K, K0, CoefficientTower
from .filtration import Filtration
from .homcomplex import HomComplex, LayerComplex
from .linalg import ZERO, Matrix, image, kernel, solve, to_q
from .modules import (
    FilteredPhiNModule,
    ValidationReport,
    change_basis,
    direct_sum as module_sum,
    is_morphism,
    tate_twist,
    validate,
)
from .restriction import extend_matrix


class MFComplex:
    """Bounded complex ``modules[i]`` in degree ``lo + i``; ``diffs[i]`` is K0-linear."""

    def __init__(self, tower: CoefficientTower, lo: int, modules: Sequence[FilteredPhiNModule],
                 diffs: Sequence[Matrix] | None = None, name: str = ""):
        self.tower = tower
        self.lo = lo
        self.modules = tuple(modules)
        if diffs is None:
            diffs = [Matrix.zeros(self.modules[i + 1].qdim, self.modules[i].qdim) for i in range(len(self.modules) - 1)]
        self.diffs = tuple(diffs)
        if len(self.diffs) != max(len(self.modules) - 1, 0):
            raise ComplexError("need one differential between consecutive degrees")
        for i, dm in enumerate(self.diffs):
            want = (self.modules[i + 1].qdim, self.modules[i].qdim)
            if dm.shape != want:
                raise ComplexError(f"differential in degree {lo + i} has shape {dm.shape}, expected {want}")
        self.name = name

    @classmethod
    def single(cls, m: FilteredPhiNModule, degree: int = 0) -> "MFComplex":
        return cls(m.tower, degree, [m], [], m.name)

    @property
    def hi(self) -> int:
        return self.lo + len(self.modules) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def module(self, n: int) -> FilteredPhiNModule | None:
        return self.modules[n - self.lo] if self.lo <= n <= self.hi else None

    def dim(self, n: int) -> int:
        m = self.module(n)
        return m.dim if m else 0

    def d(self, n: int) -> Matrix:
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        a, b = self.module(n), self.module(n + 1)
        return Matrix.zeros(b.qdim if b else 0, a.qdim if a else 0)

    def rig(self) -> LayerComplex:
        return LayerComplex(self.tower, K0, self.lo, tuple(m.dim for m in self.modules), self.diffs,
                            tuple(m.phi for m in self.modules), tuple(m.nmat for m in self.modules))

    def dr(self) -> LayerComplex:
        return LayerComplex(self.tower, K, self.lo, tuple(m.dim for m in self.modules),
                            tuple(extend_matrix(self.tower, dm) for dm in self.diffs),
                            filts=tuple(m.filt for m in self.modules))

    def vector_complex(self) -> VectorComplex:
        return self.rig().vector_complex()

    def validate(self) -> ValidationReport:
        return validate_complex(self)

    def shift(self, k: int) -> "MFComplex":
        sign = (-1) ** k
        return MFComplex(self.tower, self.lo - k, self.modules, [dm.scale(sign) for dm in self.diffs], self.name)

    def twist(self, n: int) -> "MFComplex":
        return MFComplex(self.tower, self.lo, [tate_twist(m, n) for m in self.modules], self.diffs, self.name)

    def __repr__(self) -> str:
        return f"MFComplex(lo={self.lo}, dims={[m.dim for m in self.modules]})"


def validate_complex(c: MFComplex) -> ValidationReport:
    checks = []
    for n in c.degrees():
        rep = validate(c.module(n))
        if not rep.ok:
            return ValidationReport(False, rep.failure, f"module in degree {n}: {rep.detail}", checks)
    checks.append("modules")
    for n in range(c.lo, c.hi):
        if not is_morphism(c.d(n), c.module(n), c.module(n + 1)):
            return ValidationReport(False, "differential-is-morphism", f"d^{n}", checks)
    checks.append("differentials-are-morphisms")
    for n in range(c.lo, c.hi - 1):
        if not (c.d(n + 1) @ c.d(n)).is_zero():
            return ValidationReport(False, "d-squared", f"d^{n + 1} d^{n} != 0", checks)
    checks.append("d-squared")
    return ValidationReport(True, None, "", checks)


def mf_direct_sum(*cs: MFComplex) -> MFComplex:
    tower = cs[0].tower
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    mods, diffs = [], []
    from .modules import zero_module
    for n in range(lo, hi + 1):
        parts = [c.module(n) or zero_module(tower) for c in cs]
        mods.append(module_sum(*parts))
    for n in range(lo, hi):
        diffs.append(Matrix.diag([c.d(n) for c in cs]))
    return MFComplex(tower, lo, mods, diffs)


@dataclass
class MFChainMap:
    src: MFComplex
    tgt: MFComplex
    maps: dict  # degree -> K0-linear Q-matrix

    def at(self, n: int) -> Matrix:
        m = self.maps.get(n)
        if m is None:
            a, b = self.src.module(n), self.tgt.module(n)
            return Matrix.zeros(b.qdim if b else 0, a.qdim if a else 0)
        return m

    def is_valid(self) -> bool:
        degs = set(self.src.degrees()) | set(self.tgt.degrees())
        for n in degs:
            a, b = self.src.module(n), self.tgt.module(n)
            if a is not None and b is not None and not is_morphism(self.at(n), a, b):
                return False
            if self.tgt.d(n) @ self.at(n) != self.at(n + 1) @ self.src.d(n):
                return False
        return True


def mf_cone(u: MFChainMap) -> MFComplex:
    """Cone in the category: degree n holds ``Y^n (+) X^{n+1}``."""
    x, y = u.src, u.tgt
    tower = x.tower
    from .modules import zero_module
    lo = min(y.lo, x.lo - 1)
    hi = max(y.hi, x.hi - 1)
    mods, diffs = [], []
    for n in range(lo, hi + 1):
        mods.append(module_sum(y.module(n) or zero_module(tower), x.module(n + 1) or zero_module(tower)))
    def q(c, n):
        mod = c.module(n)
        return mod.qdim if mod else 0

    for n in range(lo, hi):
        diffs.append(Matrix.block([[y.d(n), u.at(n + 1)], [None, x.d(n + 1).scale(-1)]],
                                  [q(y, n + 1), q(x, n + 2)], [q(y, n), q(x, n + 1)]))
    return MFComplex(tower, lo, mods, diffs)


# the three-column machinery shared by Gamma and Lambda


@dataclass
class ThreeColumn:
    """``A --phi--> B --psi--> C`` with ``psi phi = 0`` and the derived complexes."""

    A: VectorComplex
    B: VectorComplex
    C: VectorComplex
    phi: ChainMap
    psi: ChainMap
    labels: dict = field(default_factory=dict)
    _total: VectorComplex | None = None

    def check(self) -> None:
        self.phi.check()
        self.psi.check()
        comp = self.psi.compose(self.phi)
        if any(not comp.at(n).is_zero() for n in self.A.degrees()):
            raise ComplexError("psi o phi != 0")

    @property
    def cone_phi(self) -> VectorComplex:
        return cone(self.phi)

    def cone_to_c(self) -> ChainMap:
        cphi = self.cone_phi
        maps = {}
        for n in cphi.degrees():
            maps[n] = Matrix.hstack([self.psi.at(n), Matrix.zeros(self.C.dim(n), self.A.dim(n + 1))], self.C.dim(n))
        return ChainMap(cphi, self.C, maps)

    @property
    def total(self) -> VectorComplex:
        """``Cone(Cone phi -> C)[-2]``; degree k is ``C^{k-2} (+) B^{k-1} (+) A^k``."""
        if self._total is None:
            self._total = shift(cone(self.cone_to_c()), -2)
        return self._total

    def layout(self, k: int) -> dict:
        c, b, a = self.C.dim(k - 2), self.B.dim(k - 1), self.A.dim(k)
        return {"C": (0, c), "B": (c, c + b), "A": (c + b, c + b + a)}

    def split(self, k: int, vec) -> dict:
        lay = self.layout(k)
        return {key: list(vec[s:e]) for key, (s, e) in lay.items()}

    def embed(self, k: int, a=None, b=None, c=None) -> list:
        lay = self.layout(k)
        vec = [ZERO] * self.total.dim(k)
        for key, part in (("A", a), ("B", b), ("C", c)):
            if part is not None:
                s, e = lay[key]
                if len(part) != e - s:
                    raise ComplexError(f"{key}-part has length {len(part)}, expected {e - s}")
                vec[s:e] = list(part)
        return vec

    def dims(self, degrees: Sequence[int]) -> list[int]:
        return self.total.betti(degrees)

    def euler_terms(self) -> tuple[int, int]:
        """``(sum (-1)^n dim H^n(total), chi(A) - chi(B) + chi(C))``; always equal."""
        chi = sum((-1) ** n * d for n, d in self.total.betti_dict().items())
        return chi, self.A.euler_characteristic() - self.B.euler_characteristic() + self.C.euler_characteristic()

    def kernel_phi(self) -> tuple[VectorComplex, ChainMap]:
        return kernel_complex(self.phi)

    def kernel_psi(self) -> tuple[VectorComplex, ChainMap]:
        return kernel_complex(self.psi)

    def tilde(self):
        """``coker(phi': A -> Ker psi)`` with its projection from ``Ker psi``."""
        kpsi, inc = self.kernel_psi()
        bases = {}
        for n in kpsi.degrees():
            img = self.phi.at(n)
            x = solve(inc.at(n), img) if img.ncols else Matrix.zeros(kpsi.dim(n), 0)
            bases[n] = image(x) if x.ncols else x
        q, proj, lifts = quotient_complex(kpsi, bases)
        return q, proj, inc

    def hat(self):
        """``coker psi`` with its projection from C."""
        bases = {n: image(self.psi.at(n)) for n in self.C.degrees()}
        return quotient_complex(self.C, bases)


@dataclass
class GammaData(ThreeColumn):
    hom: HomComplex | None = None
    hom_k: HomComplex | None = None
    f0: VectorComplex | None = None
    f0_inc: ChainMap | None = None
    phi_op: ChainMap | None = None
    n_op: ChainMap | None = None
    ext: ChainMap | None = None


def frobenius_op(h: HomComplex, x: LayerComplex, y: LayerComplex) -> ChainMap:
    inv = {j: x.phi_at(j).inverse() for j in x.degrees()}
    return h.degreewise(h, post=y.phi_at, pre=lambda j: inv[j])


def monodromy_op(h: HomComplex, x: LayerComplex, y: LayerComplex) -> ChainMap:
    a = h.degreewise(h, post=y.n_at)
    b = h.degreewise(h, pre=x.n_at)
    return ChainMap(h.vc, h.vc, {n: a.at(n) - b.at(n) for n in h.degrees()})


def _eye(c: VectorComplex) -> dict:
    return {n: Matrix.identity(c.dim(n)) for n in c.degrees()}


def gamma(l: MFComplex, m: MFComplex, check: bool = True) -> GammaData:
    if not l.tower.same_as(m.tower):
        raise ComplexError("tower mismatch")
    if check:
        for c, nm in ((l, "L"), (m, "M")):
            rep = validate_complex(c)
            if not rep.ok:
                raise ComplexError(f"invalid complex {nm}: {rep.failure} ({rep.detail})")
    p = to_q(l.tower.p)
    lr, mr = l.rig(), m.rig()
    h = HomComplex(lr, mr)
    hk = HomComplex(l.dr(), m.dr())
    f0, f0_inc = hk.filtration_subcomplex(0)
    phi_h = frobenius_op(h, lr, mr)
    n_h = monodromy_op(h, lr, mr)
    ext = h.ext_to(hk)
    hv = h.vc
    A = direct_sum(hv, f0)
    B = direct_sum(hv, hv, hk.vc)
    C = hv
    phis, psis = {}, {}
    for n in A.degrees():
        dh, df, dk = hv.dim(n), f0.dim(n), hk.vc.dim(n)
        eye = Matrix.identity(dh)
        phis[n] = Matrix.block([[n_h.at(n), None], [eye - phi_h.at(n), None], [ext.at(n).scale(-1), f0_inc.at(n)]],
                               [dh, dh, dk], [dh, df])
    for n in B.degrees():
        dh, dk = hv.dim(n), hk.vc.dim(n)
        eye = Matrix.identity(dh)
        psis[n] = Matrix.block([[eye - phi_h.at(n).scale(p), n_h.at(n).scale(-1), None]], [dh], [dh, dh, dk])
    g = GammaData(A, B, C, ChainMap(A, B, phis), ChainMap(B, C, psis),
                  labels={"A": ["x", "y"], "B": ["x", "y", "z"], "C": ["x"]},
                  hom=h, hom_k=hk, f0=f0, f0_inc=f0_inc, phi_op=phi_h, n_op=n_h, ext=ext)
    if check:
        g.check()
    return g


@dataclass
class ExtResult:
    degrees: list
    dims: list
    reps: dict  # degree -> list of vectors in total-complex coordinates

    def as_dict(self) -> dict:
        return {"degrees": self.degrees, "H": self.dims,
                "representatives": {str(k): [[str(x) for x in v] for v in vs] for k, vs in self.reps.items()}}


def ext_range(l: MFComplex, m: MFComplex) -> list[int]:
    return list(range(m.lo - l.hi, m.hi - l.lo + 3))


def ext_groups(l: MFComplex | FilteredPhiNModule, m: MFComplex | FilteredPhiNModule,
               degrees: Sequence[int] | None = None, data: GammaData | None = None) -> ExtResult:
    l, m = as_complex(l), as_complex(m)
    g = data or gamma(l, m)
    degs = list(degrees) if degrees is not None else ext_range(l, m)
    tot = g.total
    dims, reps = [], {}
    for k in degs:
        h = cohomology(tot, k)
        dims.append(h.dim)
        reps[k] = h.reps.columns()
    return ExtResult(degs, dims, reps)


def ext_dims(l, m, degrees: Sequence[int] | None = None) -> list[int]:
    l, m = as_complex(l), as_complex(m)
    g = gamma(l, m)
    degs = list(degrees) if degrees is not None else ext_range(l, m)
    return g.total.betti(degs)


def as_complex(x) -> MFComplex:
    if isinstance(x, MFComplex):
        return x
    if isinstance(x, FilteredPhiNModule):
        return MFComplex.single(x, 0)
    raise TypeError(f"expected a module or MF complex, got {type(x).__name__}")


def homotopy_hom(l, m, n: int, data: GammaData | None = None) -> int:
    """``dim H^n(ker phi)`` = chain maps ``L -> M[n]`` modulo homotopy."""
    l, m = as_complex(l), as_complex(m)
    g = data or gamma(l, m)
    kc, _ = g.kernel_phi()
    return cohomology(kc, n).dim


def chain_map_to_ext_class(f: MFChainMap, data: GammaData | None = None) -> tuple[list, bool]:
    """The 0-cochain ``(f, f, 0, 0, 0, 0)`` of the total complex and whether it is a cocycle."""
    g = data or gamma(f.src, f.tgt)
    h, hk = g.hom, g.hom_k
    x = h.element(0, {j: f.at(j) for j in f.src.degrees() if h.block(0, j) is not None})
    xk = g.ext.at(0) @ x if x else []
    y = solve(g.f0_inc.at(0), Matrix.from_columns([xk], len(xk))) if xk else Matrix.zeros(0, 1)
    ok = y is not None
    if y is None:
        # not filtration preserving: use a least-pivot lift into Hom_K, reported as failure
        y_vec = [ZERO] * g.f0.dim(0)
    else:
        y_vec = y.column(0) if y.ncols else []
    vec = g.embed(0, a=list(x) + list(y_vec))
    if ok:
        d = g.total.d(0)
        ok = not any(d @ vec)
    return vec, ok


def random_basis_change(c: MFComplex, rng, entry_range: int = 2) -> MFComplex:
    """Conjugate each degree by a random invertible K0-matrix."""
    from .modules import random_invertible
    qs = [random_invertible(c.tower, mod.dim, rng, entry_range) for mod in c.modules]
    mods = [change_basis(mod, q) for mod, q in zip(c.modules, qs)]
    diffs = [qs[i + 1].inverse() @ dm @ qs[i] for i, dm in enumerate(c.diffs)]
    return MFComplex(c.tower, c.lo, mods, diffs, c.name)


__all__ = [
    "MFComplex", "MFChainMap", "GammaData", "ThreeColumn", "gamma", "ext_groups", "ext_dims", "homotopy_hom",
    "chain_map_to_ext_class", "validate_complex", "mf_direct_sum", "mf_cone", "as_complex", "kernel", "subcomplex",
    "Filtration",
]
