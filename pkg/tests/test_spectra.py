from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chordgf.spectra import (
    EMPTY,
    DiagramType,
    Orientability,
    Series,
    Spectrum,
    coefficient_of,
    partial_derivative,
    series_add,
    series_combine,
    series_mul,
    series_scale,
    validate_type,
)

O = Orientability.ORIENTABLE
e = Spectrum.e

spectra = st.dictionaries(st.integers(0, 8), st.integers(0, 4), max_size=5).map(Spectrum)
small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
keys = st.tuples(st.integers(-2, 2), spectra, spectra)
series = st.dictionaries(keys, small_fracs, max_size=6).map(Series)


def test_canonical_form_drops_zeros_and_sorts():
    s = Spectrum({3: 1, 0: 2, 5: 0})
    assert tuple(s) == ((0, 2), (3, 1))
    assert repr(s) == "2e0+e3"
    assert repr(EMPTY) == "0"
    assert Spectrum.from_list([1, 2, 2]) == e(1) + e(2, 2)


def test_rejects_negative_entries():
    with pytest.raises(ValueError):
        Spectrum({-1: 1})
    with pytest.raises(ValueError):
        Spectrum({1: -1})
    with pytest.raises(ValueError):
        e(1) - e(2)


def test_json_round_trip():
    s = e(0, 2) + e(7)
    assert s.to_json() == [[0, 2], [7, 1]]
    assert Spectrum.from_json(s.to_json()) == s


@given(spectra, spectra, spectra)
def test_addition_is_associative_and_commutative(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


@given(spectra, spectra)
def test_weight_and_size_are_additive(a, b):
    assert (a + b).weight() == a.weight() + b.weight()
    assert (a + b).size() == a.size() + b.size()
    assert (a + b) - b == a


def test_figure_type_validates():
    t = DiagramType(O, 1, 6, 2, e(6) + e(8), e(0, 2) + e(1, 2), e(1) + e(2, 2) + e(9))
    assert validate_type(t)
    assert not validate_type(DiagramType(O, 1, 6, 2, e(6) + e(8), e(0, 2) + e(1, 2), e(1, 2)))


@pytest.mark.parametrize("m", [0, 1, 5])
def test_chordless_type_validates(m):
    assert validate_type(DiagramType(O, 0, 0, m, e(m), e(m)))


def test_inconsistent_length_spectrum_rejected():
    assert not validate_type(DiagramType(O, 0, 1, 0, e(2), e(0, 2), e(1) + e(1)))


def test_series_examples():
    assert coefficient_of(Series(), (0, e(1), e(1))) == 0
    a = Series({(-2, e(2), e(2)): 1, (-2, e(1), e(1)): 1})
    assert coefficient_of(a, (-2, e(2), e(2))) == 1
    assert not series_add(a, series_scale(a, -1))


@given(series, series, small_fracs, small_fracs, keys)
def test_series_linearity(a, b, lam, mu, key):
    combo = series_combine([(lam, a), (mu, b)])
    assert coefficient_of(combo, key) == lam * coefficient_of(a, key) + mu * coefficient_of(b, key)


@given(series, series)
def test_product_commutes(a, b):
    assert series_mul(a, b) == series_mul(b, a)


@given(series, series, st.integers(0, 8))
def test_derivative_is_a_derivation(a, b, i):
    lhs = partial_derivative(series_mul(a, b), i)
    rhs = series_mul(partial_derivative(a, i), b) + series_mul(a, partial_derivative(b, i))
    assert lhs == rhs


def test_derivative_examples():
    f = Series.monomial(0, e(1, 2) + e(0), EMPTY)
    assert partial_derivative(f, 1) == Series.monomial(0, e(1) + e(0), EMPTY, 2)
    assert not partial_derivative(Series.monomial(0, e(1, 2), EMPTY), 3)
    g = Series.monomial(0, e(2, 2), EMPTY)
    assert partial_derivative(partial_derivative(g, 2), 2) == Series.monomial(0, EMPTY, EMPTY, 2)


@given(series)
def test_series_json_round_trip(a):
    assert Series.from_json(a.to_json()) == a
    assert all(isinstance(c, Fraction) for _, c in a)
