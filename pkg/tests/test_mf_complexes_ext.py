import random

import pytest
from hypothesis import given

from synkernel.complexes import ComplexError, shift
from synkernel.examples import (
    default_tower,
    quadratic_tower,
    random_complex,
    random_module,
    random_two_term,
    tate_curve,
    two_term_complex,
    unit_twist,
)
from synkernel.linalg import Matrix, annihilator, kernel, rank, to_q
from synkernel.mfcomplex import (
    MFChainMap,
    MFComplex,
    as_complex,
    chain_map_to_ext_class,
    ext_dims,
    ext_groups,
    gamma,
    homotopy_hom,
    mf_direct_sum,
    validate_complex,
)
from synkernel.modules import internal_hom
from synkernel.witnesses import hat_witness, random_tilde_cocycle, tilde_witness

from conftest import seeds


def unit_pair(n=0):
    t = default_tower()
    return as_complex(unit_twist(t)), as_complex(unit_twist(t, n))


# Gamma on the unit pairs


def test_gamma_unit_pair_shape():
    l, m = unit_pair(0)
    g = gamma(l, m)
    assert g.total.lo == 0 and list(g.total.dims) == [2, 3, 1]
    assert g.total.betti([0, 1, 2]) == [1, 1, 0]
    assert (g.total.d(0).rank(), g.total.d(1).rank()) == (1, 1)


def test_gamma_unit_twist_one():
    l, m = unit_pair(1)
    g = gamma(l, m)
    # F^0 Hom_K vanishes after the twist
    assert list(g.total.dims) == [1, 3, 1]
    assert g.total.betti([0, 1, 2]) == [0, 2, 1]
    # p phi is the identity on the twisted Hom, so psi kills the x slot
    assert g.psi.at(0).column(0) == [0]


def test_gamma_unit_twist_minus_one():
    l, m = unit_pair(-1)
    g = gamma(l, m)
    assert g.total.betti([0, 1, 2]) == [0, 0, 0]
    assert (g.total.d(0).rank(), g.total.d(1).rank()) == (2, 1)


def test_ext_groups_report_representatives():
    l, m = unit_pair(0)
    res = ext_groups(l, m)
    assert res.degrees == [0, 1, 2] and res.dims == [1, 1, 0]
    g = gamma(l, m)
    for k, vecs in res.reps.items():
        for v in vecs:
            assert not any(g.total.d(k) @ v)


def test_ext_of_tate_curve_with_itself():
    t = default_tower()
    m = tate_curve(t)
    assert ext_dims(m, m, [0])[0] >= 1


def test_gamma_rejects_invalid_complex():
    t = default_tower()
    u = unit_twist(t)
    scaled = MFComplex(t, 0, [u, u], [Matrix([[1]]).scale(2)])
    bad2 = MFComplex(t, 0, [u, unit_twist(t, 1)], [Matrix([[1]])])
    assert validate_complex(scaled).ok
    assert not validate_complex(bad2).ok
    with pytest.raises(ComplexError):
        gamma(as_complex(u), bad2)


# Hom complex


def test_hom_complex_of_single_modules():
    t = default_tower()
    l, m = tate_curve(t), unit_twist(t, 1)
    g = gamma(as_complex(l), as_complex(m))
    assert list(g.hom.vc.degrees()) == [0]
    assert g.hom.vc.dim(0) == internal_hom(l, m).qdim


def test_hom_into_shift_is_shifted_hom():
    rng = random.Random(11)
    t = default_tower()
    l, m = random_two_term(t, rng), random_two_term(t, rng)
    h = gamma(l, m).hom.vc
    h1 = gamma(l, m.shift(1)).hom.vc
    degs = list(h.degrees())
    assert h1.betti([n - 1 for n in degs]) == h.betti(degs)
    assert [h1.dim(n - 1) for n in degs] == [h.dim(n) for n in degs]


# homotopy classes


def test_homotopy_hom_unit():
    l, m = unit_pair(0)
    assert [homotopy_hom(l, m, n) for n in (-1, 0, 1)] == [0, 1, 0]


def _morphism_constraints(a, b, f):
    """Stacked linear conditions for f: a -> b to be a morphism (f = 1, e = 1 profile)."""
    rows = []
    for mat in (f @ a.phi - b.phi @ f, f @ a.nmat - b.nmat @ f):
        rows.extend(v for r in mat.rows for v in r)
    lo, hi = min(a.filt.lo, b.filt.lo), max(a.filt.hi, b.filt.hi)
    for k in range(lo, hi + 1):
        src, tgt = a.filt.F(k), b.filt.F(k)
        ann = annihilator(tgt, b.qdim)
        if src.ncols and ann.nrows:
            rows.extend(v for r in (ann @ f @ src).rows for v in r)
    return rows


def _unit_matrices(nr, nc):
    for i in range(nr):
        for j in range(nc):
            e = Matrix.zeros(nr, nc)
            e.rows[i][j] = to_q(1)
            yield e


def _solution_space(l, m, degs, shift_by, extra):
    """Basis (as dicts of matrices) of degreewise morphisms L^n -> M^{n+shift_by} satisfying ``extra``."""
    slots = [(n, l.module(n), m.module(n + shift_by)) for n in degs
             if l.module(n) is not None and m.module(n + shift_by) is not None]
    basis = [(n, e) for n, a, b in slots for e in _unit_matrices(b.qdim, a.qdim)]
    if not basis:
        return []

    def constraints(fs):
        rows = []
        for n, a, b in slots:
            rows += _morphism_constraints(a, b, fs.get(n, Matrix.zeros(b.qdim, a.qdim)))
        return rows + extra(fs)

    cols = [constraints({n: e}) for n, e in basis]
    ker = kernel(Matrix.from_columns(cols, len(cols[0])))
    out = []
    for v in ker.columns():
        fs = {}
        for (n, e), c in zip(basis, v):
            if c:
                fs[n] = fs.get(n, Matrix.zeros(*e.shape)) + e.scale(c)
        out.append(fs)
    return out


def brute_force_homotopy_classes(l, m):
    """dim of chain maps L -> M modulo null-homotopic ones, by direct linear solve."""
    degs = sorted(set(l.degrees()) | set(m.degrees()))

    def get(fs, n, a_dim, b_dim):
        return fs.get(n, Matrix.zeros(b_dim, a_dim))

    def qd(c, n):
        mod = c.module(n)
        return mod.qdim if mod else 0

    def chain(fs):
        rows = []
        for n in degs:
            lhs = m.d(n) @ get(fs, n, qd(l, n), qd(m, n))
            rhs = get(fs, n + 1, qd(l, n + 1), qd(m, n + 1)) @ l.d(n)
            rows.extend(v for r in (lhs - rhs).rows for v in r)
        return rows

    maps = _solution_space(l, m, degs, 0, chain)
    homs = _solution_space(l, m, degs, -1, lambda fs: [])
    if not maps:
        return 0
    flat_len = None

    def flatten(fs):
        out = []
        for n in degs:
            out.extend(v for r in get(fs, n, qd(l, n), qd(m, n)).rows for v in r)
        return out

    images = []
    for hs in homs:
        f = {}
        for n in degs:
            h_n = hs.get(n, Matrix.zeros(qd(m, n - 1), qd(l, n)))
            h_n1 = hs.get(n + 1, Matrix.zeros(qd(m, n), qd(l, n + 1)))
            f[n] = m.d(n - 1) @ h_n + h_n1 @ l.d(n)
        images.append(flatten(f))
    flat = [flatten(fs) for fs in maps]
    flat_len = len(flat[0])
    r_maps = rank(Matrix.from_columns(flat, flat_len))
    r_hom = rank(Matrix.from_columns(images, flat_len)) if images else 0
    return r_maps - r_hom


@given(seeds)
def test_homotopy_hom_matches_brute_force(seed):
    rng = random.Random(seed)
    t = default_tower()
    l = random_complex(t, rng)
    m = random_complex(t, rng)
    assert homotopy_hom(l, m, 0) == brute_force_homotopy_classes(l, m)


def test_brute_force_sees_a_homotopy():
    # the identity of X -> X is null-homotopic, so the class count drops to 0
    t = default_tower()
    u = unit_twist(t)
    c = MFComplex(t, 0, [u, u], [Matrix([[1]])])
    assert brute_force_homotopy_classes(c, c) == 0 == homotopy_hom(c, c, 0)


# chain maps to Ext classes


def test_identity_chain_map_gives_identity_class():
    l, _ = unit_pair(0)
    vec, ok = chain_map_to_ext_class(MFChainMap(l, l, {0: Matrix([[1]])}))
    assert ok and vec == [1, 1]
    res = ext_groups(l, l)
    assert res.reps[0] == [vec]


def test_zero_chain_map_gives_zero_cocycle():
    l, _ = unit_pair(0)
    vec, ok = chain_map_to_ext_class(MFChainMap(l, l, {0: Matrix([[0]])}))
    assert ok and not any(vec)


def test_non_morphism_fails_cocycle_test():
    t = default_tower()
    u = as_complex(unit_twist(t))
    m = as_complex(unit_twist(t, 1))
    vec, ok = chain_map_to_ext_class(MFChainMap(u, m, {0: Matrix([[1]])}))
    assert not ok


# witnesses


def test_tilde_witness_zero_cocycle():
    l, m = unit_pair(0)
    w = tilde_witness(l, m, [to_q(0)] * 3)
    assert w.ok


def test_tilde_witness_unit_class():
    l, m = unit_pair(0)
    w = tilde_witness(l, m, [to_q(0), to_q(0), to_q(1)])
    assert w.ok
    # M'^i = M^i + L^{i+1} + L^i + L^{i+1} + L^i + L^i + L^{i-1} in degrees -1, 0, 1
    assert w.data["dims"]["M'"] == [2, 4, 1]


def test_hat_witness_zero():
    l, m = unit_pair(0)
    assert hat_witness(l, m, x_vec=[to_q(0)]).ok


def test_hat_witness_unit_uses_r_two():
    l, m = unit_pair(0)
    w = hat_witness(l, m, x_vec=[to_q(1)])
    assert w.ok and w.data["r"] == 2
    # M + two copies of (M, M[-1]) in degrees 0, 1
    assert w.data["dims"]["M'"] == [3, 2]


def test_hat_witness_tate_curve():
    t = default_tower()
    w = hat_witness(unit_twist(t), tate_curve(t), x_vec=[to_q(1), to_q(-2)])
    assert w.ok and w.data["r"] == 4


# properties


def _pair(seed):
    rng = random.Random(seed)
    t = default_tower() if seed % 3 else quadratic_tower()
    l = random_complex(t, rng) if seed % 2 else as_complex(random_module(t, rng, 2))
    return rng, t, l, random_complex(t, rng)


@given(seeds)
def test_euler_characteristic_of_gamma(seed):
    _, _, l, m = _pair(seed)
    chi, col = gamma(l, m).euler_terms()
    assert chi == col


@given(seeds)
def test_single_module_euler_formula(seed):
    rng = random.Random(seed)
    t = default_tower()
    a, b = random_module(t, rng, 2), random_module(t, rng, 2)
    g = gamma(as_complex(a), as_complex(b))
    chi = sum((-1) ** n * h for n, h in zip(range(3), ext_dims(a, b, [0, 1, 2])))
    assert chi == g.f0.dim(0) - a.dim * b.dim * t.e * t.f


@given(seeds)
def test_ext_vanishes_outside_zero_to_two(seed):
    rng = random.Random(seed)
    t = default_tower()
    a, b = random_module(t, rng, 2), random_module(t, rng, 2)
    dims = ext_dims(a, b, [-2, -1, 3, 4])
    assert dims == [0, 0, 0, 0]


@given(seeds)
def test_identity_class_is_nonzero(seed):
    rng = random.Random(seed)
    a = random_module(default_tower(), rng, 3)
    assert ext_dims(a, a, [0])[0] >= 1


@given(seeds)
def test_shift_compatibility(seed):
    rng, _, l, m = _pair(seed)
    k = rng.choice([-1, 1, 2])
    degs = list(range(-2, 5))
    assert ext_dims(l, m.shift(k), [n - k for n in degs]) == ext_dims(l, m, degs)


@given(seeds)
def test_gamma_is_additive_in_direct_sums(seed):
    rng, t, l, m = _pair(seed)
    m2 = random_complex(t, rng)
    degs = list(range(-3, 5))
    both = ext_dims(l, mf_direct_sum(m, m2), degs)
    assert both == [a + b for a, b in zip(ext_dims(l, m, degs), ext_dims(l, m2, degs))]


@given(seeds)
def test_random_witnesses_hold(seed):
    rng, _, l, m = _pair(seed)
    g = gamma(l, m)
    w = tilde_witness(l, m, random_tilde_cocycle(g, rng))
    assert w.ok, w.failures()
    h = hat_witness(l, m, x_vec=[to_q(rng.randint(-2, 2)) for _ in range(g.hom.vc.dim(0))])
    assert h.ok, h.failures()
