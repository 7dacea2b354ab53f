from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from siegel_rkhs.errors import ExactnessError
from siegel_rkhs.exact import I, ONE, ZERO, EchelonBasis, QQi, nullspace, rank, to_mpq

rats = st.fractions(max_denominator=50).map(lambda f: mpq(f.numerator, f.denominator))
qqi = st.builds(QQi, rats, rats)


def test_to_mpq_inputs():
    assert to_mpq("3/4") == mpq(3, 4)
    assert to_mpq(0.5) == mpq(1, 2)
    assert to_mpq(Fraction(2, 3)) == mpq(2, 3)
    with pytest.raises(ExactnessError):
        to_mpq(object())


def test_i_squared():
    assert I * I == -ONE


@given(qqi, qqi, qqi)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conj() == a.conj() * b.conj()
    if a:
        assert a * a.inverse() == ONE
        assert (b / a) * a == b


@given(qqi, st.integers(-4, 6))
def test_power(a, k):
    if k < 0 and not a:
        return
    expected = ONE
    for _ in range(abs(k)):
        expected = expected * a
    if k < 0:
        expected = expected.inverse()
    assert a ** k == expected


def test_echelon_rank_and_membership():
    b = EchelonBasis()
    assert b.add({(0,): ONE, (1,): ONE}) is not None
    assert b.add({(0,): QQi(2), (1,): QQi(2)}) is None
    assert b.add({(1,): I}) is not None
    assert b.contains({(0,): QQi(5)})
    assert rank([{(0,): ONE}, {(0,): I}, {(2,): ONE}]) == 2


def test_nullspace():
    A = [[ONE, QQi(2), QQi(3)], [QQi(2), QQi(4), QQi(6)]]
    N = nullspace(A)
    assert len(N) == 2
    for x in N:
        for row in A:
            assert sum((r * v for r, v in zip(row, x)), ZERO) == ZERO
