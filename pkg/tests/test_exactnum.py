import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tortken.exactnum import (Field, Matrix, MixedFieldsError, NotSquareError,
                              OutOfRangeError, Scalar, binom_p_quotient,
                              binomial, lucas_binomial)

Q = Field.rationals()
F3 = Field.prime(3)
F5 = Field.prime(5)


def test_scalar_examples():
    assert Scalar(Q, "1/2") + Scalar(Q, "1/3") == Scalar(Q, "5/6")
    assert Scalar(F3, 2) * Scalar(F3, 2) == Scalar(F3, 1)
    assert Scalar(Q, 7) / Scalar(Q, -14) == Scalar(Q, "-1/2")
    v = (Scalar(Q, 7) / Scalar(Q, -14)).value
    assert (v.numerator, v.denominator) == (-1, 2)


def test_scalar_errors():
    with pytest.raises(ZeroDivisionError):
        Scalar(F5, 1) / Scalar(F5, 0)
    with pytest.raises(MixedFieldsError):
        Scalar(Q, 1) + Scalar(F5, 1)
    with pytest.raises(ZeroDivisionError):
        F3.coerce(Fraction(1, 3))


def test_field_construction():
    with pytest.raises(ValueError):
        Field.prime(6)
    with pytest.raises(ValueError):
        Field(4)
    assert Field(7).char == 7


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
residues5 = st.integers(min_value=0, max_value=4)


@given(rationals, rationals, rationals)
def test_field_axioms_rationals(a, b, c):
    f = Q
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == f.zero
    if not f.is_zero(a):
        assert f.mul(a, f.inv(a)) == f.one


@given(residues5, residues5, residues5)
def test_field_axioms_f5(a, b, c):
    f = F5
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    if a:
        assert f.mul(a, f.inv(a)) == 1


def test_binomial_examples():
    assert binomial(2, 1) == 2
    assert binomial(4, 2) == 6
    assert binomial(6, 3) % 3 == 2
    assert binomial(5, -1) == 0
    assert binomial(5, 7) == 0
    with pytest.raises(OutOfRangeError):
        binomial(-1, 0)


def test_pascal_rule():
    for n in range(1, 65):
        for k in range(n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lucas_property(p):
    for n in range(201):
        for k in range(n + 1):
            assert lucas_binomial(n, k, p) == math.comb(n, k) % p


def test_binom_p_quotient():
    assert binom_p_quotient(3, 1, 1) == 1          # C(3,1)/3 = 1
    assert binom_p_quotient(3, 2, 3) == 1          # C(9,3)/3 = 28 = 1 mod 3
    assert binom_p_quotient(2, 2, 2) == 1          # C(4,2)/2 = 3 = 1 mod 2
    with pytest.raises(OutOfRangeError):
        binom_p_quotient(3, 1, 0)
    with pytest.raises(OutOfRangeError):
        binom_p_quotient(3, 1, 3)


def test_rref_examples():
    ident = Matrix.identity(Q, 3)
    R, rank, pivots = ident.rref()
    assert R == ident and rank == 3 and pivots == (0, 1, 2)
    Z = Matrix.zero(F5, 2, 5)
    assert Z.rref()[1] == 0
    assert Z.nullspace() == [list(r) for r in Matrix.identity(F5, 5).data]


def test_nullspace_examples():
    assert Matrix.identity(Q, 3).nullspace() == []
    m = Matrix(F3, [[1, 1]])
    assert m.nullspace() == [[2, 1]]
    for v in m.nullspace():
        assert all(x == 0 for x in m.mul_vec(v))


small_entries = st.integers(min_value=-4, max_value=4)


@settings(max_examples=60)
@given(st.integers(2, 4), st.integers(2, 5), st.data())
def test_rref_idempotent_and_nullspace(rows, cols, data):
    entries = [[data.draw(small_entries) for _ in range(cols)]
               for _ in range(rows)]
    for field in (Q, F5):
        m = Matrix(field, entries)
        R, rank, pivots = m.rref()
        R2, rank2, pivots2 = R.rref()
        assert R2 == R and rank2 == rank and pivots2 == pivots
        basis = m.nullspace()
        assert len(basis) == cols - rank
        for v in basis:
            assert all(field.is_zero(x) for x in m.mul_vec(v))


def test_det_examples():
    assert Matrix.identity(Q, 4).det() == 1
    rep = Matrix(Q, [[1, 2], [1, 2]])
    assert rep.det() == 0
    sys3 = Matrix(Q, [[5, 7, 6], [7, 6, 5], [6, 5, 7]])
    assert abs(sys3.det()) == 54
    with pytest.raises(NotSquareError):
        Matrix.zero(Q, 2, 3).det()


@settings(max_examples=40)
@given(st.integers(2, 4), st.data())
def test_det_matches_rank_deficiency(n, data):
    entries = [[data.draw(small_entries) for _ in range(n)] for _ in range(n)]
    m = Matrix(Q, entries)
    singular = m.rref()[1] < n
    assert (m.det() == 0) == singular


def test_matrix_json_round_trip():
    m = Matrix(Q, [[Fraction(1, 2), 3], [Fraction(-7, 5), 0]])
    assert Matrix.from_json(Q, m.to_json()) == m
    m3 = Matrix(F3, [[1, 2], [0, 1]])
    assert Matrix.from_json(F3, m3.to_json()) == m3


def test_solve():
    m = Matrix(Q, [[1, 1], [0, 1]])
    assert m.solve([3, 2]) == [1, 2]
    assert Matrix(Q, [[1, 0], [1, 0]]).solve([1, 2]) is None
