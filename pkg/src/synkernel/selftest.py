"""Seeded property suites behind ``synkernel selftest`` and the acceptance tests."""

from __future__ import annotations

import random
import time
import traceback
from dataclasses import dataclass, field

from .complexes import ChainMap, FilteredVectorComplex, VectorComplex, cone, shift, spectral_sequence
from .examples import (
    default_tower,
    elliptic_good,
    perturbed_theta,
    quadratic_tower,
    random_complex,
    random_module,
    unit_twist,
)
from .hodge import (
    cohomology_module,
    ext_phc,
    gamma_to_lambda,
    is_hk,
    lambda_data,
    remark_map,
    strictness_check,
    theta_embed,
    validate_phc,
)
from .linalg import Matrix, to_q
from .mfcomplex import MFComplex, as_complex, ext_dims, gamma
from .modules import change_basis, dual, newton_number, hodge_number, random_invertible, tensor, validate
from .syntomic import les_check, leray, smooth_split, syn_cohomology
from .witnesses import (
    hat_witness,
    hat_witness_phc,
    random_tilde_cocycle,
    tilde_witness,
    tilde_witness_phc,
)


@dataclass
class SuiteResult:
    key: str
    name: str
    trials: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"suite": self.key, "name": self.name, "trials": self.trials, "passed": self.passed,
                "ok": self.ok, "failures": self.failures[:5], "seconds": round(self.seconds, 3)}


def trial_rng(seed: int, key: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{key}:{i}")


# suites: each takes (rng, i) and returns a list of failure strings


def suite_ext(rng, i):
    t = default_tower()
    out = []
    u = unit_twist(t)
    want = {0: [1, 1, 0], 1: [0, 2, 1], -1: [0, 0, 0]}
    n = [0, 1, -1][i % 3]
    got = ext_dims(u, unit_twist(t, n), [0, 1, 2])
    if got != want[n]:
        out.append(f"Ext(unit, unit({n})) = {got}")
    l = random_module(t, rng, 2)
    m = random_module(t, rng, 2)
    degs = [-2, -1, 0, 1, 2, 3, 4]
    dims = ext_dims(l, m, degs)
    if dims[0] or dims[1] or dims[5] or dims[6]:
        out.append(f"Ext outside [0, 2]: {dims}")
    if ext_dims(l, l, [0])[0] < 1:
        out.append("Ext^0(L, L) = 0")
    k = rng.choice([-1, 1])
    shifted = ext_dims(as_complex(l), as_complex(m).shift(k), [d - k for d in degs])
    if shifted != dims:
        out.append(f"shift compatibility fails for k={k}")
    return out


def suite_gamma_lambda(rng, i):
    t = default_tower()
    l = random_complex(t, rng) if i % 2 else as_complex(random_module(t, rng, 2))
    m = random_complex(t, rng)
    degs = list(range(-2, 5))
    a = ext_dims(l, m, degs)
    b = ext_phc(theta_embed(l), theta_embed(m), degs)
    out = []
    if a != b:
        out.append(f"Gamma {a} != Lambda {b}")
    chain, _, _ = gamma_to_lambda(l, m)
    if not chain.is_chain_map():
        out.append("gamma_to_lambda is not a chain map")
    elif not chain.is_quasi_isomorphism():
        out.append("gamma_to_lambda is not a quasi-isomorphism")
    return out


def suite_syntomic(rng, i):
    t = default_tower()
    out = []
    if i == 0:
        r = syn_cohomology(theta_embed(unit_twist(t)), 1)
        if r.H_syn != [0, 2, 1]:
            out.append(f"H_syn(unit, 1) = {r.H_syn}")
    l = random_complex(t, rng)
    n = rng.randint(-1, 2)
    th = theta_embed(l)
    rep = syn_cohomology(th, n)
    want = ext_dims(unit_twist(t), l.twist(n), rep.degrees)
    if rep.H_syn != want:
        out.append(f"syn {rep.H_syn} != Ext(unit, L({n})) {want}")
    pert = perturbed_theta(l, rng)
    got = syn_cohomology(pert, n, rep.degrees).H_syn
    if got != rep.H_syn:
        out.append(f"perturbed pHC gives {got}, expected {rep.H_syn}")
    chain, _, _ = remark_map(th)
    if not chain.is_quasi_isomorphism():
        out.append("Lambda(K0, M) -> Lambda_0(M) is not a quasi-isomorphism")
    return out


def suite_witnesses(rng, i):
    t = default_tower()
    out = []
    l = random_complex(t, rng) if i % 3 == 2 else as_complex(random_module(t, rng, 2))
    m = random_complex(t, rng) if i % 2 else as_complex(random_module(t, rng, 2))
    g = gamma(l, m)
    z = random_tilde_cocycle(g, rng)
    w = tilde_witness(l, m, z)
    if not w.ok:
        out.append(f"tilde: {w.failures()}")
    h = hat_witness(l, m, x_vec=[to_q(rng.randint(-2, 2)) for _ in range(g.hom.vc.dim(0))])
    if not h.ok:
        out.append(f"hat: {h.failures()}")
    tl, tm = theta_embed(l), theta_embed(m)
    lam = lambda_data(tl, tm)
    z2 = random_tilde_cocycle(lam, rng)
    w2 = tilde_witness_phc(tl, tm, z2)
    if not w2.ok:
        out.append(f"tilde pHC: {w2.failures()}")
    h2 = hat_witness_phc(tl, tm, x_vec=[to_q(rng.randint(-2, 2)) for _ in range(lam.hom_rig.vc.dim(0))])
    if not h2.ok:
        out.append(f"hat pHC: {h2.failures()}")
    return out


def suite_les(rng, i):
    t = default_tower()
    l = random_complex(t, rng)
    m = theta_embed(l) if i % 2 == 0 else perturbed_theta(l, rng)
    rep = les_check(m, rng.randint(-1, 2))
    if not rep.ok:
        return [f"les: {rep.error or rep.failures()[:2] or rep.identifications}"]
    return []


def suite_leray(rng, i):
    t = default_tower()
    l = random_complex(t, rng)
    m = theta_embed(l) if i % 2 == 0 else perturbed_theta(l, rng)
    rep = leray(m, rng.randint(-1, 2))
    if not rep.ok:
        return [f"leray: {rep.as_dict()}"]
    return []


def suite_split(rng, i):
    t = default_tower()
    if i == 0:
        mod = elliptic_good(t)
        m = theta_embed(MFComplex.single(mod, 1))
    else:
        m = theta_embed(MFComplex.single(random_module(t, rng, 2, monodromy=False), rng.randint(0, 1)))
    n = rng.randint(-1, 2)
    rep = smooth_split(m, n)
    if not rep.ok:
        return [f"split: {rep.as_dict()}"]
    return []


def suite_tannakian(rng, i):
    t = default_tower() if i % 2 == 0 else quadratic_tower()
    l = random_module(t, rng, 2)
    m = random_module(t, rng, 2)
    out = []
    lm = tensor(l, m)
    if not validate(lm).ok:
        out.append("tensor fails validate")
    if newton_number(lm) != l.dim * newton_number(m) + m.dim * newton_number(l):
        out.append("t_N not additive under tensor")
    if hodge_number(lm) != l.dim * hodge_number(m) + m.dim * hodge_number(l):
        out.append("t_H not additive under tensor")
    dl = dual(l)
    if newton_number(dl) != -newton_number(l) or hodge_number(dl) != -hodge_number(l):
        out.append("dual does not negate invariants")
    q = random_invertible(t, l.dim, rng)
    if newton_number(change_basis(l, q)) != newton_number(l):
        out.append("t_N depends on the basis")
    return out


def suite_euler(rng, i):
    t = default_tower()
    l = random_complex(t, rng) if i % 2 else as_complex(random_module(t, rng, 2))
    m = random_complex(t, rng)
    g = gamma(l, m)
    chi, col = g.euler_terms()
    out = []
    if chi != col:
        out.append(f"chi {chi} != dim A - dim B + dim C = {col}")
    if l.hi == l.lo and m.hi == m.lo:
        a, b = l.modules[0], m.modules[0]
        f0 = g.f0.dim(0)
        if chi != f0 - a.dim * b.dim * t.e * t.f:
            out.append("single-module Euler formula fails")
    return out


def _rand(rng, rows: int, cols: int) -> Matrix:
    m = Matrix.zeros(rows, cols)
    for r in range(rows):
        for c in range(cols):
            m.rows[r][c] = to_q(rng.randint(-1, 1))
    return m


def random_vector_complex(rng, length: int = 3, max_dim: int = 3) -> VectorComplex:
    """Random bounded complex in degrees 0..length-1 (each d lands in the kernel of the next)."""
    from .linalg import kernel
    dims = [rng.randint(0, max_dim) for _ in range(length)]
    diffs = [None] * (length - 1)
    # built backwards: each d^n is a random map into ker d^{n+1}
    for n in range(length - 2, -1, -1):
        if n == length - 2:
            diffs[n] = _rand(rng, dims[n + 1], dims[n])
        else:
            ker = kernel(diffs[n + 1])
            diffs[n] = ker @ _rand(rng, ker.ncols, dims[n]) if ker.ncols else Matrix.zeros(dims[n + 1], dims[n])
    return VectorComplex(0, dims, diffs)


def suite_linear(rng, i):
    """Cone long exact sequence, shift and spectral sequence sanity on random complexes."""
    out = []
    c = random_vector_complex(rng)
    degs = list(c.degrees())
    chi = sum((-1) ** n * d for n, d in zip(degs, c.betti(degs)))
    if chi != c.euler_characteristic():
        out.append("Euler characteristic mismatch")
    k = rng.randint(-2, 2)
    if shift(c, k).betti([n - k for n in degs]) != c.betti(degs):
        out.append("shift reindexing fails")
    # c * id + (h d + d h) is a chain map for any h
    h = {n: _rand(rng, c.dim(n - 1), c.dim(n)) for n in degs}
    scal = rng.randint(-1, 1)
    maps = {}
    for n in degs:
        m = Matrix.identity(c.dim(n)).scale(scal)
        if n + 1 in h:
            m = m + h[n + 1] @ c.d(n)
        if n - 1 in degs:
            m = m + c.d(n - 1) @ h[n]
        maps[n] = m
    u = ChainMap(c, c, maps)
    if not u.is_chain_map():
        out.append("homotopy-perturbed identity is not a chain map")
        return out
    cc = cone(u)
    rng_deg = list(range(-1, len(degs) + 1))
    hd = {n: c.betti([n])[0] for n in rng_deg}
    rk = {n: u.induced(n).rank() if hd[n] else 0 for n in rng_deg}
    for n in rng_deg[:-1]:
        # H^n(cone) = coker H^n(u) (+) ker H^{n+1}(u)
        if cc.betti([n])[0] != (hd[n] - rk[n]) + (hd[n + 1] - rk[n + 1]):
            out.append(f"cone sequence not exact at degree {n}")
    fc = FilteredVectorComplex(c, {}, 0, 0)
    pages = spectral_sequence(fc, 2)
    if any(pages[0].total(n) != c.betti([n])[0] for n in degs):
        out.append("one-step filtration does not reproduce cohomology")
    if any(v for pg in pages for v in pg.ranks.values()):
        out.append("one-step filtration has nonzero differentials")
    return out


def suite_hodge(rng, i):
    t = default_tower()
    l = random_complex(t, rng)
    th = theta_embed(l)
    out = []
    if not validate_phc(th).ok:
        out.append("Theta image fails validate")
    if not strictness_check(th):
        out.append("Theta image is not strict")
    if not is_hk(th):
        out.append("Theta image fails the HK surrogate")
    pert = perturbed_theta(l, rng)
    if not is_hk(pert):
        out.append("perturbed image fails the HK surrogate")
    for j in th.degrees():
        res = cohomology_module(pert, j)
        if not res.ok or not validate(res.module).ok:
            out.append(f"cohomology module in degree {j} is invalid")
    return out


SUITES = [
    ("1", "ext-dimensions", suite_ext),
    ("2", "gamma-lambda-equivalence", suite_gamma_lambda),
    ("3", "syntomic-consistency", suite_syntomic),
    ("4", "witnesses", suite_witnesses),
    ("5", "long-exact-sequences", suite_les),
    ("6", "leray", suite_leray),
    ("7", "smooth-split", suite_split),
    ("8", "tannakian-invariants", suite_tannakian),
    ("9", "euler-characteristic", suite_euler),
    ("linear", "linear-kernel", suite_linear),
    ("hodge", "hodge-complexes", suite_hodge),
]


def run_suite(key: str, seed: int = 0, trials: int = 25) -> SuiteResult:
    for k, name, fn in SUITES:
        if k == key or name == key:
            break
    else:
        raise KeyError(f"unknown suite {key!r}")
    res = SuiteResult(k, name)
    start = time.perf_counter()
    for i in range(trials):
        res.trials += 1
        try:
            fails = fn(trial_rng(seed, k, i), i)
        except Exception as exc:  # a crash is a failed trial, reported with its cause
            fails = [f"{type(exc).__name__}: {exc}"]
            if not str(exc):
                fails.append(traceback.format_exc(limit=2))
        if fails:
            res.failures.append({"trial": i, "errors": fails})
        else:
            res.passed += 1
    res.seconds = time.perf_counter() - start
    return res


def selftest(seed: int = 0, trials: int = 25, suites=None) -> dict:
    keys = suites or [k for k, _, _ in SUITES]
    results = [run_suite(k, seed, trials) for k in keys]
    return {"seed": seed, "trials": trials, "ok": all(r.ok for r in results),
            "suites": [r.as_dict() for r in results]}


__all__ = ["SUITES", "SuiteResult", "run_suite", "selftest", "trial_rng"]
