import random

from hypothesis import given

from synkernel.complexes import (
    ChainMap,
    DoubleComplex,
    FilteredVectorComplex,
    VectorComplex,
    cohomology,
    cone,
    identity_map,
    shift,
    spectral_sequence,
    total_complex,
    zero_map,
)
from synkernel.fields import K, K0
from synkernel.linalg import Matrix, kernel, rank, rank_kernel_image, solve, to_q
from synkernel.restriction import restrict_scalars
from synkernel.selftest import random_vector_complex

from conftest import seeds

ONE = Matrix.identity(1)


def q_line(degree=0):
    return VectorComplex(degree, [1], [])


# rank / kernel / image


def test_identity_has_full_rank():
    r, ker, img = rank_kernel_image(Matrix.identity(2))
    assert (r, ker.ncols, img.ncols) == (2, 0, 2)


def test_zero_matrix_has_full_kernel():
    r, ker, img = rank_kernel_image(Matrix.zeros(3, 2))
    assert (r, ker.ncols, img.ncols) == (0, 2, 0)


def test_dependent_rows_rank_one():
    # second row is twice the first
    assert rank(Matrix([[1, 2], [2, 4]])) == 1
    ker = kernel(Matrix([[1, 2], [2, 4]]))
    assert ker.ncols == 1 and Matrix([[1, 2], [2, 4]]) @ ker == Matrix.zeros(2, 1)


def test_exact_fractions_survive_elimination():
    m = Matrix([["1/3", "1/7"], ["1/5", "1/11"]])
    assert m.det() == to_q("1/33") - to_q("1/35")
    assert m @ m.inverse() == Matrix.identity(2)


def test_solve_returns_none_when_inconsistent():
    assert solve(Matrix([[1], [1]]), Matrix([[1], [2]])) is None


# cohomology


def test_single_line_has_cohomology_one():
    assert cohomology(q_line(), 0).dim == 1


def test_identity_complex_is_acyclic():
    c = VectorComplex(0, [1, 1], [ONE])
    assert c.betti([0, 1]) == [0, 0]


def test_unit_pair_gamma_shape():
    # dims (2,3,1), d0(x,y) = (0,0,y-x), d1(x,y,z) = (1-p)x with p = 5
    d0 = Matrix([[0, 0], [0, 0], [-1, 1]])
    d1 = Matrix([[-4, 0, 0]])
    c = VectorComplex(0, [2, 3, 1], [d0, d1])
    assert (rank(d0), rank(d1)) == (1, 1)
    assert c.betti([0, 1, 2]) == [1, 1, 0]
    reps = cohomology(c, 0).reps
    assert d0 @ reps == Matrix.zeros(3, 1)


def test_cohomology_outside_range_is_zero():
    assert cohomology(q_line(), 5).dim == 0


def test_non_complex_rejected():
    import pytest
    from synkernel.complexes import ComplexError
    with pytest.raises(ComplexError):
        VectorComplex(0, [1, 1, 1], [ONE, ONE])


# cones and shifts


def test_cone_of_identity_is_acyclic():
    c = q_line()
    assert cone(identity_map(c)).is_acyclic()


def test_cone_of_zero_splits():
    c = VectorComplex(0, [1, 1], [Matrix.zeros(1, 1)])
    cc = cone(zero_map(c, c))
    for n in range(-1, 2):
        assert cc.betti([n])[0] == c.betti([n])[0] + c.betti([n + 1])[0]


def test_cone_of_one_minus_p_is_acyclic():
    c = q_line()
    assert cone(ChainMap(c, c, {0: Matrix([[1 - 5]])})).is_acyclic()


def test_cone_rejects_non_chain_map():
    import pytest
    from synkernel.complexes import ComplexError
    c = VectorComplex(0, [1, 1], [ONE])
    with pytest.raises(ComplexError):
        cone(ChainMap(c, c, {0: ONE}))


def test_shift_zero_and_back():
    c = random_vector_complex(random.Random(3))
    assert shift(c, 0).same_as(c)
    assert shift(shift(c, 1), -1).same_as(c)


# total complex


def test_single_row_is_the_row():
    dc = DoubleComplex({(0, 0): 1, (1, 0): 1}, horizontal={(0, 0): Matrix([[2]])})
    tot, _ = total_complex(dc)
    assert list(tot.dims) == [1, 1] and tot.d(0) == Matrix([[2]])


def test_single_column_is_the_column():
    dc = DoubleComplex({(0, 0): 1, (0, 1): 2}, vertical={(0, 0): Matrix([[1], [3]])})
    tot, _ = total_complex(dc)
    assert list(tot.dims) == [1, 2] and tot.d(0) == Matrix([[1], [3]])


def test_square_of_identities_is_acyclic():
    cells = {(a, b): 1 for a in (0, 1) for b in (0, 1)}
    dc = DoubleComplex(cells, horizontal={(0, 0): ONE, (0, 1): ONE}, vertical={(0, 0): ONE, (1, 0): ONE})
    tot, _ = total_complex(dc)
    assert list(tot.dims) == [1, 2, 1]
    assert tot.is_acyclic()


# spectral sequences


def test_one_step_filtration_gives_cohomology_at_e1():
    c = VectorComplex(0, [2, 3, 1], [Matrix([[0, 0], [0, 0], [-1, 1]]), Matrix([[-4, 0, 0]])])
    pages = spectral_sequence(FilteredVectorComplex(c, {}, 0, 0), 3)
    for pg in pages:
        assert [pg.total(n) for n in range(3)] == [1, 1, 0]
        assert not any(pg.ranks.values())


def test_two_step_filtration_of_acyclic_complex():
    c = VectorComplex(0, [1, 1], [ONE])
    # F^1 = the degree-1 line only
    fc = FilteredVectorComplex(c, {(1, 0): Matrix.zeros(1, 0), (1, 1): ONE}, 0, 1)
    fc.check()
    pages = spectral_sequence(fc, 3)
    assert pages[0].nonzero()  # E_1 sees both lines
    assert not pages[-1].nonzero()


# restriction of scalars


def test_restriction_is_identity_for_f1(tower):
    assert restrict_scalars(tower, K0, [[3]]) == Matrix([[3]])


def test_restriction_of_sigma_line(tower_f2):
    # phi = sigma on a one-dimensional K0-space becomes the sigma matrix on {1, x}
    assert restrict_scalars(tower_f2, K0, [[1]], semilinear=True) == tower_f2.sigma_matrix


def test_restriction_dimension_count(tower_e2, tower_f2):
    from synkernel.examples import quadratic_tower
    t = quadratic_tower(5, 2)
    m = restrict_scalars(t, K, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert m.shape == (3 * t.e * t.f, 3 * t.e * t.f)


# properties


@given(seeds)
def test_random_complex_squares_to_zero(seed):
    c = random_vector_complex(random.Random(seed), length=4)
    for n in list(c.degrees())[:-1]:
        assert (c.d(n + 1) @ c.d(n)).is_zero()


@given(seeds)
def test_euler_characteristic_of_cohomology(seed):
    c = random_vector_complex(random.Random(seed), length=4)
    degs = list(c.degrees())
    assert sum((-1) ** n * h for n, h in zip(degs, c.betti(degs))) == c.euler_characteristic()


@given(seeds)
def test_shift_reindexes_cohomology(seed):
    rng = random.Random(seed)
    c = random_vector_complex(rng)
    k = rng.randint(-3, 3)
    degs = list(c.degrees())
    assert shift(c, k).betti([n - k for n in degs]) == c.betti(degs)


@given(seeds)
def test_cone_long_exact_sequence(seed):
    from synkernel.selftest import suite_linear
    assert suite_linear(random.Random(seed), 0) == []


@given(seeds)
def test_page_dims_follow_previous_differentials(seed):
    rng = random.Random(seed)
    c = random_vector_complex(rng, length=3, max_dim=3)
    # F^1 = degrees >= 1 (stupid truncation) is a subcomplex
    steps = {(1, n): (Matrix.identity(c.dim(n)) if n >= 1 else Matrix.zeros(c.dim(n), 0)) for n in c.degrees()}
    fc = FilteredVectorComplex(c, steps, 0, 1)
    fc.check()
    pages = spectral_sequence(fc, 4)
    for a, b in zip(pages, pages[1:]):
        for (p, q), dim in a.dims.items():
            out_rank = a.ranks.get((p, q), 0)
            in_rank = a.ranks.get((p - a.r, q + a.r - 1), 0)
            assert b.dims.get((p, q), 0) == dim - out_rank - in_rank
    degs = list(c.degrees())
    assert [pages[-1].total(n) for n in degs] == c.betti(degs)
