import random

import pytest
from hypothesis import given

from synkernel.complexes import ComplexError, flipped_cone_sign
from synkernel.examples import (
    acyclic_phc,
    default_tower,
    elliptic_good,
    perturbed_theta,
    random_complex,
    random_module,
    tate_curve,
    unit_twist,
)
from synkernel.hodge import cohomology_module, theta_embed
from synkernel.linalg import Matrix
from synkernel.mfcomplex import MFComplex, as_complex, ext_dims, validate_complex
from synkernel.modules import direct_sum
from synkernel.syntomic import (
    MFDoubleComplex,
    SyntomicError,
    les_check,
    leray,
    simplicial_total,
    smooth_split,
    syn_cohomology,
)

from conftest import seeds

ONE = Matrix.identity(1)


def theta_unit(t, n=0):
    return theta_embed(unit_twist(t, n))


# syntomic cohomology


@pytest.mark.parametrize("n,want", [(0, [1, 1, 0]), (1, [0, 2, 1]), (2, [0, 1, 0]), (-1, [0, 0, 0])])
def test_syn_of_unit(tower, n, want):
    assert syn_cohomology(theta_unit(tower), n, [0, 1, 2]).H_syn == want


def test_syn_twist_one_auxiliary_groups(tower):
    rep = syn_cohomology(theta_unit(tower), 1, [0, 1, 2])
    # F^0 of the twisted de Rham line vanishes
    assert rep.H_A == [1, 0, 0]
    assert rep.H_C == [1, 0, 0]


def test_syn_of_acyclic_is_zero(tower):
    m = acyclic_phc(tower, random.Random(0))
    rep = syn_cohomology(m, 1)
    assert not any(rep.H_syn)


def test_syn_representatives_are_cocycles(tower):
    from synkernel.hodge import lambda0
    rep = syn_cohomology(theta_unit(tower), 1, [0, 1, 2])
    tot = lambda0(theta_unit(tower).twist(1)).total
    for k, vecs in rep.reps.items():
        assert len(vecs) == rep.H_syn[rep.degrees.index(k)]
        for v in vecs:
            assert not any(tot.d(k) @ v)


# long exact sequences


def test_les_unit_exact(tower):
    rep = les_check(theta_unit(tower), 0)
    assert rep.ok and rep.error is None
    assert all(node.exact for node in rep.nodes)


def test_les_acyclic_trivially_exact(tower):
    rep = les_check(acyclic_phc(tower, random.Random(4)), 2)
    assert rep.ok
    assert all(node.dim == 0 for node in rep.nodes)


def test_les_breaks_under_flipped_cone_sign(tower):
    c = MFComplex(tower, 0, [unit_twist(tower), unit_twist(tower)], [ONE.scale(3)])
    with flipped_cone_sign():
        rep = les_check(theta_embed(c), 0)
    assert not rep.ok


# Leray


def test_leray_single_module_is_one_row(tower):
    m = tate_curve(tower)
    rep = leray(theta_embed(m), 1)
    assert rep.ok
    assert all(j == 0 for (i, j), v in rep.e2.items() if v)
    want = ext_dims(unit_twist(tower), as_complex(m).twist(1), [0, 1, 2])
    assert [rep.e2.get((i, 0), 0) for i in range(3)] == want


def test_leray_two_rows(tower):
    u, u1 = unit_twist(tower), unit_twist(tower, 1)
    m = theta_embed(MFComplex(tower, 0, [u, u1]))
    rep = leray(m, 0)
    assert rep.ok
    assert [rep.e2.get((i, 0), 0) for i in range(3)] == [1, 1, 0]
    assert [rep.e2.get((i, 1), 0) for i in range(3)] == [0, 2, 1]
    syn = syn_cohomology(m, 0)
    assert [rep.h_syn[k] for k in syn.degrees] == syn.H_syn
    for k in syn.degrees:
        assert sum(v for (i, j), v in rep.e3.items() if i + j == k) == rep.h_syn[k]


def test_leray_refuses_non_strict(tower):
    from test_phodge import two_term_dr
    rep = leray(two_term_dr(tower, 0, 1), 0)
    assert not rep.ok and rep.error


# smooth splitting


def test_split_unit_twist_one(tower):
    rep = smooth_split(theta_unit(tower), 1, [0, 1, 2])
    assert rep.ok
    assert (rep.H_syn, rep.H_tilde, rep.H_cone) == ([0, 2, 1], [0, 1, 0], [0, 1, 1])


def test_split_unit_twist_zero(tower):
    rep = smooth_split(theta_unit(tower), 0, [0, 1, 2])
    assert rep.ok
    # the cone of (1 - p) id is acyclic
    assert rep.H_syn == rep.H_tilde == [1, 1, 0] and not any(rep.H_cone)


def test_split_elliptic_in_degree_one(tower):
    m = theta_embed(MFComplex.single(elliptic_good(tower), 1))
    rep = smooth_split(m, 1, [1, 2, 3])
    assert rep.ok
    # 1 is not a Frobenius eigenvalue because a_p != 1 + p
    assert rep.H_cone[1] == 0 and rep.H_syn[1] == rep.H_tilde[1]


def test_split_rejects_monodromy(tower):
    with pytest.raises(SyntomicError):
        smooth_split(theta_embed(tate_curve(tower)), 0)


# simplicial totalization


def test_single_row_total(tower):
    u = unit_twist(tower)
    dc = MFDoubleComplex({(0, 0): u, (1, 0): u}, horizontal={(0, 0): ONE.scale(2)})
    tot = simplicial_total(dc)
    assert tot.lo == 0 and [m.dim for m in tot.modules] == [1, 1]
    assert tot.d(0) == ONE.scale(2)


def test_single_column_total(tower):
    u = unit_twist(tower)
    dc = MFDoubleComplex({(0, 0): u, (0, 1): u}, vertical={(0, 0): ONE})
    tot = simplicial_total(dc)
    assert [m.dim for m in tot.modules] == [1, 1] and tot.d(0) == ONE


def _cech_rows(t, vertical: bool):
    u = unit_twist(t)
    pair = direct_sum(u, u)
    diff = Matrix([[1, -1]])
    mods = {(0, 0): pair, (1, 0): u, (0, 1): pair, (1, 1): u}
    vert = {(0, 0): Matrix.identity(2), (1, 0): ONE} if vertical else {}
    return MFDoubleComplex(mods, horizontal={(0, 0): diff, (0, 1): diff}, vertical=vert)


def test_cech_rows_without_vertical_maps(tower):
    # each row U + U -> U has H^0 = 1, H^1 = 0; rows sit in total degrees 0 and 1
    tot = simplicial_total(_cech_rows(tower, False))
    assert validate_complex(tot).ok
    assert [m.dim for m in tot.modules] == [2, 3, 1]
    assert tot.vector_complex().betti([0, 1, 2]) == [1, 1, 0]


def test_cech_rows_with_identity_columns(tower):
    tot = simplicial_total(_cech_rows(tower, True))
    assert tot.vector_complex().betti([0, 1, 2]) == [0, 0, 0]
    assert not any(syn_cohomology(theta_embed(tot), 1).H_syn)


def test_simplicial_rejects_non_morphisms(tower):
    dc = MFDoubleComplex({(0, 0): unit_twist(tower), (1, 0): unit_twist(tower, 1)}, horizontal={(0, 0): ONE})
    with pytest.raises(ComplexError):
        simplicial_total(dc)


def test_simplicial_rejects_non_commuting_square(tower):
    u = unit_twist(tower)
    mods = {(a, b): u for a in (0, 1) for b in (0, 1)}
    dc = MFDoubleComplex(mods, horizontal={(0, 0): ONE, (0, 1): ONE}, vertical={(0, 0): ONE, (1, 0): ONE.scale(2)})
    with pytest.raises(ComplexError):
        simplicial_total(dc)


# properties


def _input(seed):
    rng = random.Random(seed)
    t = default_tower()
    l = random_complex(t, rng)
    m = theta_embed(l) if seed % 2 == 0 else perturbed_theta(l, rng)
    return rng, t, l, m


@given(seeds)
def test_syn_matches_ext_from_unit(seed):
    rng, t, l, m = _input(seed)
    n = rng.randint(-1, 2)
    rep = syn_cohomology(m, n)
    assert rep.H_syn == ext_dims(unit_twist(t), l.twist(n), rep.degrees)
    assert all(v >= 0 for v in rep.H_syn)


@given(seeds)
def test_les_always_exact(seed):
    rng, _, _, m = _input(seed)
    rep = les_check(m, rng.randint(-1, 2))
    assert rep.ok, rep.failures()


@given(seeds)
def test_leray_converges(seed):
    rng, _, _, m = _input(seed)
    rep = leray(m, rng.randint(-1, 2))
    assert rep.ok, rep.as_dict()


@given(seeds)
def test_split_summands_add_up(seed):
    rng = random.Random(seed)
    t = default_tower()
    mod = random_module(t, rng, 2, monodromy=False)
    rep = smooth_split(theta_embed(MFComplex.single(mod, rng.randint(0, 1))), rng.randint(-1, 2))
    assert rep.ok
    assert rep.H_syn == [a + b for a, b in zip(rep.H_tilde, rep.H_cone)]
