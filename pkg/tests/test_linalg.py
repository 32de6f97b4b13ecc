from fractions import Fraction

import pytest

from src.errors import ConfigurationError, ScalarDomainError
from src.linalg import (
    NUMERIC,
    SYMBOLIC,
    EchelonSpan,
    ScalarField,
    cyclic_span,
    generalized_kernel,
    identity_matrix,
    is_invariant,
    matrices_equal,
    matrix,
    split_by_subspace,
    stacked_nullspace,
    word_span,
    word_span_dimension,
)
from src.scalars import FractionScalar, LaurentScalar, q_power


@pytest.fixture
def qq():
    return ScalarField(NUMERIC, 1, 4)


def m(rows, fld):
    return matrix([[fld.from_rational(v) for v in r] for r in rows], fld)


def test_numeric_field_specializes_t():
    fld = ScalarField(NUMERIC, 2, 4)
    assert fld.to_rational(fld.from_laurent(q_power(2, 1))) == 16
    assert fld.encode(fld.from_laurent(q_power(2, Fraction(1, 2)))) == '4'
    assert fld.describe() == {'mode': 'numeric', 'N': 2, 't0': '4'}


def test_numeric_field_rejects_zero_t0():
    with pytest.raises(ScalarDomainError):
        ScalarField(NUMERIC, 1, 0)
    with pytest.raises(ConfigurationError):
        ScalarField('float')


def test_numeric_pole():
    fld = ScalarField(NUMERIC, 1, 4)
    one = LaurentScalar.one(1)
    f = FractionScalar(one, LaurentScalar.from_dict(1, {1: 1, 0: -4}))
    with pytest.raises(ScalarDomainError):
        fld.from_fraction(f)


def test_symbolic_encode_decode():
    fld = ScalarField(SYMBOLIC, 1)
    x = fld.from_laurent(q_power(1, 1))
    assert fld.encode(x) == {'N': 1, 'terms': [[1, 1, 1]]}
    assert fld.decode(fld.encode(x)) == x
    inv = fld.one / (x - fld.one)
    assert fld.decode(fld.encode(inv)) == inv
    assert fld.specialize(inv, 3) == Fraction(1, 2)


def test_field_equality():
    assert ScalarField(SYMBOLIC, 2) == ScalarField(SYMBOLIC, 2, 7)
    assert ScalarField(NUMERIC, 2, 4) != ScalarField(NUMERIC, 2, 5)
    assert ScalarField(NUMERIC, 1, 4).with_root_index(3).root_index == 3


def test_cyclic_span_and_invariance(qq):
    nil = m([[0, 1], [0, 0]], qq)
    e1 = [qq.one, qq.zero]
    e2 = [qq.zero, qq.one]
    assert len(cyclic_span([nil], e1, qq)) == 1
    assert len(cyclic_span([nil], e2, qq)) == 2
    assert is_invariant([nil], [e1], qq)
    assert not is_invariant([nil], [e2], qq)


def test_split_by_subspace(qq):
    g = m([[2, 1], [0, 3]], qq)
    sub, quot = split_by_subspace([g], [[qq.one, qq.zero]], qq)
    assert matrices_equal(sub[0], m([[2]], qq))
    assert matrices_equal(quot[0], m([[3]], qq))


def test_word_span_dimension(qq):
    nil = m([[0, 1], [0, 0]], qq)
    assert word_span_dimension([nil], qq) == 2
    assert word_span_dimension([nil, m([[0, 0], [1, 0]], qq)], qq) == 4
    assert word_span_dimension([identity_matrix(2, qq)], qq) == 1


def test_word_span_reports_truncation(qq):
    gens = [m([[0, 1], [0, 0]], qq), m([[0, 0], [1, 0]], qq)]
    assert word_span(gens, qq) == (4, False)
    assert word_span(gens, qq, max_words=1) == (2, True)
    assert word_span_dimension(gens, qq, max_words=1) == 2


def test_kernels(qq):
    nil = m([[0, 1], [0, 0]], qq)
    assert len(generalized_kernel(nil)) == 2
    assert len(stacked_nullspace([nil, m([[1, 0], [0, 0]], qq)])) == 0
    assert len(stacked_nullspace([nil])) == 1


def test_echelon_span(qq):
    span = EchelonSpan(3, qq)
    v = [qq.from_rational(x) for x in (1, 2, 3)]
    w = [qq.from_rational(x) for x in (2, 4, 6)]
    assert span.add(v)
    assert not span.add(w)
    assert span.contains(w)
    assert span.dimension == 1
    with pytest.raises(ConfigurationError):
        span.add([qq.one])
