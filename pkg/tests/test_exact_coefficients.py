import math

import pytest
from hypothesis import given, strategies as st

from synkernel.fields import K, K0, CoefficientTower, FieldError, field_arith, sigma, valuation
from synkernel.examples import default_tower, quadratic_tower, ramified_tower
from synkernel.linalg import Matrix, to_q

from conftest import nonzero_ints, small_ints


# valuation


def test_valuation_of_p_is_one(tower):
    assert valuation(tower.k0(5)) == 1


def test_valuation_of_one_is_zero(tower):
    assert valuation(tower.k0(1)) == 0


def test_valuation_of_zero_is_infinite(tower):
    assert valuation(tower.k0(0)) == math.inf


def test_valuation_of_fraction(tower):
    assert valuation(tower.k0("3/25")) == -2


def test_uniformizer_has_valuation_half(tower_e2):
    # pi^2 = p by the relation y^2 - p, so 2 v(pi) = 1
    assert valuation(tower_e2.pi) == to_q("1/2")


def test_pi_squared_is_p(tower_e2):
    assert field_arith(tower_e2.pi, tower_e2.pi, "mul") == tower_e2.k(5)


def test_quadratic_unramified_unit_valuation(tower_f2):
    # x^2 = c with c a non-residue, so x is a unit
    assert valuation(tower_f2.x) == 0
    assert valuation(tower_f2.x * 5) == 1


# sigma


def test_sigma_is_identity_for_f1(tower):
    a = tower.k0("3/7")
    assert sigma(a) == a


def test_sigma_negates_generator(tower_f2):
    assert sigma(tower_f2.x) == -tower_f2.x


def test_sigma_has_order_two(tower_f2):
    a = tower_f2.k0(("2/3", "-5"))
    assert sigma(sigma(a)) == a
    assert sigma(a) != a


def test_sigma_fixes_one(tower_f2):
    assert sigma(tower_f2.k0(1)) == tower_f2.k0(1)


def test_sigma_rejects_k_layer(tower_e2):
    with pytest.raises(FieldError):
        sigma(tower_e2.pi)


# arithmetic


def test_add_fractions(tower):
    assert field_arith(tower.k0("1/2"), tower.k0("1/3"), "add") == tower.k0("5/6")


def test_inverse_of_p(tower):
    assert field_arith(tower.k0(5), None, "inv") == tower.k0("1/5")


def test_inverse_of_zero_raises(tower):
    with pytest.raises(ZeroDivisionError):
        tower.k0(0).inverse()


def test_layer_mismatch_raises(tower_e2):
    with pytest.raises(FieldError):
        tower_e2.k0(1) + tower_e2.pi


def test_non_prime_rejected():
    with pytest.raises(FieldError):
        CoefficientTower(6)


def test_non_eisenstein_rejected():
    with pytest.raises(FieldError):
        CoefficientTower(5, e=2, eisenstein=((-25,), (0,), (1,)))


def test_custom_sigma_must_be_multiplicative():
    with pytest.raises(FieldError):
        CoefficientTower(5, f=2, k0_modulus=(-2, 0, 1), sigma_matrix=Matrix([[1, 1], [0, -1]]))


# properties


def _elements(draw, t, layer):
    return t.element(layer, tuple(draw(small_ints) for _ in range(t.deg(layer))))


TOWERS = [default_tower(), quadratic_tower(), ramified_tower(), quadratic_tower(5, 2)]


@st.composite
def element_pairs(draw):
    t = draw(st.sampled_from(TOWERS))
    layer = draw(st.sampled_from([K0, K]))
    return _elements(draw, t, layer), _elements(draw, t, layer)


@given(element_pairs())
def test_valuation_is_multiplicative(pair):
    a, b = pair
    if a.is_zero() or b.is_zero():
        return
    assert valuation(a * b) == valuation(a) + valuation(b)


@given(element_pairs())
def test_valuation_is_ultrametric(pair):
    a, b = pair
    if a.is_zero() or b.is_zero() or (a + b).is_zero():
        return
    assert valuation(a + b) >= min(valuation(a), valuation(b))


@given(element_pairs())
def test_inverse_times_element_is_one(pair):
    a, _ = pair
    if a.is_zero():
        return
    assert a.inverse() * a == a.tower.element(a.layer, 1)


@given(element_pairs())
def test_sigma_is_a_valuation_preserving_ring_map(pair):
    a, b = pair
    a, b = a.tower.k0(a.coords[: a.tower.f]), b.tower.k0(b.coords[: b.tower.f])
    assert sigma(a * b) == sigma(a) * sigma(b)
    assert sigma(a + b) == sigma(a) + sigma(b)
    if not a.is_zero():
        assert valuation(sigma(a)) == valuation(a)


@given(nonzero_ints, nonzero_ints)
def test_sigma_fixes_rationals(a, b):
    t = quadratic_tower()
    q = t.k0(to_q(a) / b)
    assert sigma(q) == q
