import random

import pytest
from hypothesis import given

from synkernel.examples import (
    default_tower,
    elliptic_good,
    non_admissible,
    quadratic_tower,
    random_module,
    tate_curve,
    unit_twist,
)
from synkernel.linalg import Matrix, to_q
from synkernel.modules import (
    EIGEN,
    N_PHI_RELATION,
    ORACLE,
    RANDOM,
    AdmissibilityError,
    FilteredPhiNModule,
    admissibility,
    change_basis,
    direct_sum,
    dual,
    hodge_number,
    internal_hom,
    newton_number,
    random_invertible,
    same_structure,
    tate_twist,
    tensor,
    unit,
    validate,
)

from conftest import seeds

TOWERS = [default_tower(), quadratic_tower()]


def invariants(m):
    return m.dim, newton_number(m), hodge_number(m)


# validate


def test_unit_passes(tower):
    rep = validate(unit(tower))
    assert rep.ok and rep.failure is None


def test_tate_curve_passes(tower):
    assert validate(tate_curve(tower)).ok


def test_monodromy_with_identity_frobenius_fails(tower):
    m = FilteredPhiNModule.from_data(tower, [[1, 0], [0, 1]], [[0, 0], [1, 0]], [(0, [[1, 0], [0, 1]])])
    rep = validate(m)
    assert not rep.ok and rep.failure == N_PHI_RELATION


def test_non_invertible_frobenius_fails(tower):
    m = FilteredPhiNModule.from_data(tower, [[1, 0], [0, 0]], None, [(0, [[1, 0], [0, 1]])])
    assert validate(m).failure == "phi-invertible"


def test_unit_is_semilinear_for_f2(tower_f2):
    m = unit(tower_f2)
    assert validate(m).ok
    assert m.phi == tower_f2.sigma_matrix


# Newton and Hodge numbers


def test_unit_invariants(tower):
    assert (newton_number(unit(tower)), hodge_number(unit(tower))) == (0, 0)


def test_tate_curve_invariants(tower):
    m = tate_curve(tower)
    assert (newton_number(m), hodge_number(m)) == (1, 1)


@pytest.mark.parametrize("n", [-2, -1, 0, 1, 3])
def test_twisted_unit_invariants(tower, n):
    m = unit_twist(tower, n)
    assert (newton_number(m), hodge_number(m)) == (-n, -n)


def test_elliptic_invariants(tower):
    m = elliptic_good(tower)
    # det of the companion matrix is p
    assert (newton_number(m), hodge_number(m)) == (1, 1)


# tensor, Hom, dual, twist


def test_unit_tensor_is_neutral(tower):
    m = tate_curve(tower)
    assert invariants(tensor(unit(tower), m)) == invariants(m)


def test_twists_tensor_additively(tower):
    assert invariants(tensor(unit_twist(tower, 2), unit_twist(tower, -3))) == invariants(unit_twist(tower, -1))


def test_hom_from_unit_is_identity(tower):
    m = tate_curve(tower)
    h = internal_hom(unit(tower), m)
    assert h.phi == m.phi and h.nmat == m.nmat and h.filt.equals(m.filt)


def test_hom_from_twist_one_to_unit(tower):
    h = internal_hom(unit_twist(tower, 1), unit(tower))
    assert h.phi == Matrix([[5]])
    assert invariants(h) == invariants(unit_twist(tower, -1))


def test_dual_of_unit_is_unit(tower):
    assert same_structure(dual(unit(tower)), unit(tower))


def test_dual_of_twist(tower):
    assert invariants(dual(unit_twist(tower, 2))) == invariants(unit_twist(tower, -2))


def test_twist_by_zero_is_identity(tower):
    m = tate_curve(tower)
    assert same_structure(tate_twist(m, 0), m)


def test_twist_round_trip(tower):
    assert same_structure(tate_twist(tate_twist(unit(tower), 1), -1), unit(tower))


def test_twist_scales_frobenius(tower):
    assert unit_twist(tower, 1).phi == Matrix([["1/5"]])
    assert unit_twist(tower, 1).filt.jumps()[0][0] == -1


# admissibility


def test_unit_is_admissible_in_every_mode(tower):
    for mode in (EIGEN, RANDOM):
        assert admissibility(unit(tower), mode).admissible
    assert admissibility(unit(tower), ORACLE, oracle=[]).admissible


def test_tate_curve_oracle_certificate(tower):
    v = admissibility(tate_curve(tower), ORACLE, oracle=[Matrix([[1], [0]])])
    assert v.admissible and v.checked == 1
    assert v.certificate == [{"dim": 1, "t_H": "0", "t_N": "0"}]


def test_tate_curve_eigen(tower):
    v = admissibility(tate_curve(tower), EIGEN)
    assert v.admissible
    # span(e1) is the only phi- and N-stable line
    assert v.checked == 1


def test_unit_root_line_breaks_admissibility(tower):
    v = admissibility(non_admissible(tower), EIGEN)
    assert not v.admissible
    assert v.violation == [["1", "0"]]
    assert (v.t_h, v.t_n) == (1, 1)


def test_random_mode_also_finds_the_violation(tower):
    assert not admissibility(non_admissible(tower), RANDOM, trials=10, seed=1).admissible


def test_oracle_rejects_non_subobject(tower):
    with pytest.raises(AdmissibilityError):
        admissibility(tate_curve(tower), ORACLE, oracle=[Matrix([[0], [1]])])


def test_eigen_needs_split_polynomial(tower):
    with pytest.raises(AdmissibilityError):
        admissibility(elliptic_good(tower), EIGEN)


def test_eigen_needs_f1(tower_f2):
    with pytest.raises(AdmissibilityError):
        admissibility(unit(tower_f2), EIGEN)


def test_mismatched_totals_are_not_admissible(tower):
    m = FilteredPhiNModule.from_data(tower, [[5]], None, [(0, [[1]])])
    v = admissibility(m, EIGEN)
    assert not v.admissible and v.note == "t_H != t_N"


# properties


def _pair(seed):
    rng = random.Random(seed)
    t = TOWERS[seed % 2]
    return rng, random_module(t, rng, 3), random_module(t, rng, 2)


@given(seeds)
def test_random_modules_validate_and_are_nilpotent(seed):
    _, l, m = _pair(seed)
    for x in (l, m):
        assert validate(x).ok
        assert x.nmat.power(x.dim).is_zero()


@given(seeds)
def test_generated_modules_are_admissible(seed):
    _, l, _ = _pair(seed)
    assert admissibility(l, RANDOM, trials=10, seed=seed).admissible


@given(seeds)
def test_newton_number_is_basis_independent(seed):
    rng, l, _ = _pair(seed)
    assert newton_number(change_basis(l, random_invertible(l.tower, l.dim, rng))) == newton_number(l)


@given(seeds)
def test_tensor_is_additive_in_invariants(seed):
    _, l, m = _pair(seed)
    lm = tensor(l, m)
    assert validate(lm).ok
    assert newton_number(lm) == l.dim * newton_number(m) + m.dim * newton_number(l)
    assert hodge_number(lm) == l.dim * hodge_number(m) + m.dim * hodge_number(l)


@given(seeds)
def test_internal_hom_validates(seed):
    _, l, m = _pair(seed)
    h = internal_hom(l, m)
    assert validate(h).ok
    assert h.dim == l.dim * m.dim


@given(seeds)
def test_dual_negates_and_double_dual_restores(seed):
    _, l, _ = _pair(seed)
    d = dual(l)
    assert (newton_number(d), hodge_number(d)) == (-newton_number(l), -hodge_number(l))
    assert invariants(dual(d)) == invariants(l)


@given(seeds)
def test_twist_shifts_invariants(seed):
    rng, l, _ = _pair(seed)
    n = rng.randint(-3, 3)
    tw = tate_twist(l, n)
    assert validate(tw).ok
    assert newton_number(tw) == newton_number(l) - n * l.dim
    assert hodge_number(tw) == hodge_number(l) - n * l.dim


@given(seeds)
def test_invariants_add_over_direct_sums(seed):
    _, l, m = _pair(seed)
    s = direct_sum(l, m)
    assert newton_number(s) == newton_number(l) + newton_number(m)
    assert hodge_number(s) == hodge_number(l) + hodge_number(m)
