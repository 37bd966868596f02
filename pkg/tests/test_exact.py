from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqsurf.exact import (
    ZETA,
    BadRootError,
    CycNum,
    DenominatorDivisibleError,
    DimensionMismatchError,
    ExactMatrix,
    Fp,
    InvalidPrimeError,
    cyc_inv,
    cyc_mul,
    determinant,
    is_prime,
    kernel_dim,
    matrix_rank,
    reduce_mod_p,
    smallest_cube_root_of_unity,
    subspace_intersection_dim,
)

from . import oracles

small = st.integers(-50, 50)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cyc = st.builds(CycNum, rationals, rationals)
nonzero_cyc = cyc.filter(bool)


# --- Q(zeta) ---------------------------------------------------------------


def test_zeta_relations():
    assert ZETA**3 == 1
    assert 1 + ZETA + ZETA**2 == 0
    assert ZETA * ZETA == -1 - ZETA


def test_cyc_mul_examples():
    assert cyc_mul(ZETA, ZETA**2) == 1
    assert cyc_mul(1 + ZETA, 1 + ZETA**2) == 1
    assert cyc_mul(2 + ZETA, 2 + ZETA) == CycNum(3, 3)


def test_cyc_inv_examples():
    assert cyc_inv(ZETA) == ZETA**2
    assert cyc_inv(CycNum(1)) == 1
    assert cyc_inv(1 - ZETA) == CycNum(Fraction(2, 3), Fraction(1, 3))


def test_cyc_inv_zero():
    with pytest.raises(ZeroDivisionError):
        cyc_inv(CycNum(0))


def test_cyc_canonical_equality_and_hash():
    assert CycNum(Fraction(2, 4), 0) == Fraction(1, 2)
    assert hash(CycNum(3)) == hash(3)
    assert CycNum(1, 2) != CycNum(1, 3)
    with pytest.raises(AttributeError):
        ZETA.a = 3


@given(nonzero_cyc)
def test_inverse_property(x):
    assert cyc_mul(x, cyc_inv(x)) == 1
    assert x / x == 1


@given(cyc)
def test_norm_zero_iff_zero(x):
    assert (x.norm() == 0) == (x == 0)
    assert x * x.conjugate() == x.norm()


@given(cyc, cyc)
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@given(cyc, st.integers(-6, 6))
def test_pow_matches_repeated_mul(x, n):
    if n < 0 and x == 0:
        return
    expected = CycNum(1)
    base = x if n >= 0 else cyc_inv(x)
    for _ in range(abs(n)):
        expected = expected * base
    assert x**n == expected


# --- F_p ---------------------------------------------------------------------


def test_primes():
    assert [n for n in range(40) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


@pytest.mark.parametrize("p,z", [(7, 2), (13, 3), (31, 5), (19, 7)])
def test_smallest_cube_root(p, z):
    assert smallest_cube_root_of_unity(p) == z


def test_smallest_cube_root_rejects():
    with pytest.raises(InvalidPrimeError):
        smallest_cube_root_of_unity(11)


def test_fp_basic():
    a = Fp(3, 7)
    assert a + 5 == 1
    assert a * a == 2
    assert a.inverse() == 5
    assert Fp(Fraction(1, 2), 7) == 4
    assert 1 / Fp(2, 7) == 4
    with pytest.raises(ZeroDivisionError):
        Fp(0, 7).inverse()
    with pytest.raises(ValueError):
        Fp(1, 7) + Fp(1, 13)
    with pytest.raises(InvalidPrimeError):
        Fp(1, 8)


def test_reduce_examples():
    assert reduce_mod_p(ZETA, 7, 2) == 2
    assert reduce_mod_p(1 + ZETA + ZETA**2, 13, 3) == 0
    assert reduce_mod_p(CycNum(Fraction(1, 2)), 7, 2) == 4


def test_reduce_errors():
    with pytest.raises(InvalidPrimeError):
        reduce_mod_p(ZETA, 11, 2)
    with pytest.raises(BadRootError):
        reduce_mod_p(ZETA, 7, 3)
    with pytest.raises(BadRootError):
        reduce_mod_p(ZETA, 7, 1)
    with pytest.raises(DenominatorDivisibleError):
        reduce_mod_p(CycNum(Fraction(1, 7)), 7, 2)


p_and_root = st.sampled_from([(7, 2), (7, 4), (13, 3), (13, 9), (31, 5), (31, 25)])
p_safe = st.builds(
    CycNum,
    st.fractions(min_value=-20, max_value=20, max_denominator=6),
    st.fractions(min_value=-20, max_value=20, max_denominator=6),
)


@given(p_safe, p_safe, p_and_root)
def test_reduce_is_ring_hom(x, y, pz):
    p, z = pz
    r = lambda v: reduce_mod_p(v, p, z)  # noqa: E731
    assert r(x * y) == r(x) * r(y)
    assert r(x + y) == r(x) + r(y)
    assert r(x - y) == r(x) - r(y)


# --- Linear algebra ----------------------------------------------------------


def test_rank_examples():
    assert matrix_rank(ExactMatrix.identity(3)) == 3
    assert matrix_rank(ExactMatrix.zeros(2, 5)) == 0
    assert matrix_rank(ExactMatrix([[1, ZETA], [ZETA**2, 1]])) == 1
    assert kernel_dim(ExactMatrix([[1, ZETA], [ZETA**2, 1]])) == 1


def test_intersection_examples():
    I3 = ExactMatrix.identity(3)
    assert subspace_intersection_dim(I3, I3) == 3
    assert subspace_intersection_dim(ExactMatrix([[1, 0]]), ExactMatrix([[0, 1]])) == 0
    U = ExactMatrix([[1, 0, 0], [0, 1, 0]])
    assert subspace_intersection_dim(U, ExactMatrix([[0, 1, 1]])) == 0
    assert subspace_intersection_dim(U, ExactMatrix([[0, 1, 0]])) == 1
    with pytest.raises(DimensionMismatchError):
        subspace_intersection_dim(U, ExactMatrix([[1, 0]]))


def test_empty_matrix():
    assert matrix_rank(ExactMatrix([], 4)) == 0
    with pytest.raises(ValueError):
        ExactMatrix([[1, 2], [3]])


int_matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=1, max_size=6)
)


@settings(max_examples=300)
@given(int_matrices)
def test_rank_matches_sympy(rows):
    assert matrix_rank(ExactMatrix(rows)) == oracles.rank_over_q(rows)


@settings(max_examples=150)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(rows):
    assert determinant(ExactMatrix(rows)) == oracles.sympy_det(rows)


@settings(max_examples=100)
@given(st.integers(1, 4).flatmap(lambda c: st.lists(st.lists(cyc, min_size=c, max_size=c), min_size=1, max_size=4)))
def test_cyclotomic_rank_matches_realification(rows):
    assert 2 * matrix_rank(ExactMatrix(rows)) == oracles.rank_over_q(oracles.realify(rows))


@given(int_matrices, st.sampled_from([7, 13, 31]))
def test_rank_over_fp_matches_oracle(rows, p):
    M = ExactMatrix([[Fp(x, p) for x in r] for r in rows])
    assert matrix_rank(M) == oracles.rank_mod_p(rows, p)


@given(int_matrices, st.data())
def test_rank_invariances(rows, data):
    M = ExactMatrix(rows)
    r = matrix_rank(M)
    assert r == matrix_rank(M.transpose())
    assert r <= min(M.rows, M.cols)
    perm = data.draw(st.permutations(range(len(rows))))
    assert matrix_rank(ExactMatrix([rows[i] for i in perm])) == r
    scale = data.draw(st.lists(st.fractions(min_value=-5, max_value=5).filter(bool), min_size=len(rows), max_size=len(rows)))
    assert matrix_rank(ExactMatrix([[s * x for x in row] for s, row in zip(scale, rows)])) == r


def test_bareiss_never_fails_on_random_matrices():
    import numpy as np

    rng = np.random.Generator(np.random.PCG64(0))
    for _ in range(1000):
        m, n = rng.integers(1, 7, size=2)
        rows = rng.integers(-4, 5, size=(m, n)).tolist()
        assert 0 <= matrix_rank(ExactMatrix(rows)) <= min(m, n)


def test_no_overflow_on_big_entries():
    big = 10**40
    M = ExactMatrix([[big, big + 1], [big + 1, big + 2]])
    assert determinant(M) == -1
    assert matrix_rank(M) == 2
