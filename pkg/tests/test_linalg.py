"""Exact linear algebra: worked examples plus randomized properties."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idealtangent.fields import QQ, PrimeField
from idealtangent.linalg import Echelon, Matrix, check_rank_consistency


def dense_rank_reference(rows, ncols):
    """Independent oracle: plain Gaussian elimination on Fractions."""
    m = [[Fraction(row.get(j, 0)) for j in range(ncols)] for row in rows]
    rank = 0
    col = 0
    nrows = len(m)
    while rank < nrows and col < ncols:
        piv = None
        for r in range(rank, nrows):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def test_rank_zero_matrix():
    assert Matrix.zeros(3, 3).rank() == 0


def test_rank_identity():
    assert Matrix.identity(4).rank() == 4


def test_rank_dependent_rows():
    m = Matrix.from_rows([{0: 1, 1: 2, 2: 3}, {0: 2, 1: 4, 2: 6}], 3)
    assert m.rank() == 1


def test_kernel_identity_empty():
    k = Matrix.identity(5).kernel_basis()
    assert k.ncols == 0


def test_kernel_zero_matrix_full():
    k = Matrix.zeros(2, 2).kernel_basis()
    assert k.ncols == 2


def test_kernel_row_vector():
    m = Matrix.from_rows([{0: 1, 1: 1}], 2)
    k = m.kernel_basis()
    assert k.ncols == 1
    col = k.col(0)
    assert col[0] == -col[1]
    assert m.mul(k).is_zero()


def test_reduce_membership():
    ech = Echelon(QQ)
    ech.insert({0: 1, 1: 2})
    ech.insert({1: 1, 2: 1})
    assert ech.contains({0: 2, 1: 5, 2: 1})
    assert not ech.contains({2: 1, 3: 4})
    assert ech.contains({0: 3, 1: 6})  # 3 * first row
    residue, _ = ech.reduce({0: 3, 1: 7})
    assert residue and 2 in residue  # reduction pushed support to column 2


matrix_strategy = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r, max_size=r)))


@settings(max_examples=120, deadline=None)
@given(matrix_strategy)
def test_rank_nullity_and_kernel_annihilation(rows):
    ncols = len(rows[0])
    sparse_rows = [{j: v for j, v in enumerate(row) if v} for row in rows]
    m = Matrix.from_rows(sparse_rows, ncols)
    r = m.rank()
    assert r == dense_rank_reference(sparse_rows, ncols)
    k = m.kernel_basis()
    assert r + k.ncols == ncols
    assert m.mul(k).is_zero()
    assert k.rank() == k.ncols  # kernel columns independent
    assert check_rank_consistency(m) == r
    assert m.transpose().rank() == r


@settings(max_examples=60, deadline=None)
@given(matrix_strategy)
def test_prime_field_rank_agreement(rows):
    # entries are tiny, so no pivot minor can be divisible by two distinct
    # primes > 10^6; agreement with the max over two primes is exact
    ncols = len(rows[0])
    sparse_rows = [{j: v for j, v in enumerate(row) if v} for row in rows]
    m = Matrix.from_rows(sparse_rows, ncols)
    r = m.rank()
    ranks = []
    for p in (1000003, 1000033):
        F = PrimeField(p)
        mp = Matrix.from_rows(
            [{j: v % p for j, v in row.items()} for row in sparse_rows], ncols, F)
        rp = mp.rank()
        assert rp <= r
        ranks.append(rp)
    assert max(ranks) == r


def test_prime_field_fraction_coercion():
    F = PrimeField(7)
    assert F.coerce(Fraction(1, 2)) == 4  # 1/2 = 4 mod 7
    with pytest.raises(Exception):
        F.coerce(Fraction(1, 7))


def test_matrix_product_and_vec():
    a = Matrix.from_rows([{0: 1, 1: 2}, {1: 1}], 2)
    b = Matrix.from_rows([{0: 3}, {0: 1, 1: 1}], 2)
    ab = a.mul(b)
    assert ab.entries == {(0, 0): Fraction(5), (0, 1): Fraction(2),
                          (1, 0): Fraction(1), (1, 1): Fraction(1)}
    assert a.times_vec({0: 1, 1: 1}) == {0: Fraction(3), 1: Fraction(1)}
