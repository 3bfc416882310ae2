from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chordgf import golden
from chordgf.freeprob import (
    NonInvertibleFirstMoment,
    ZeroLeadingWeight,
    dirac_moments,
    free_add,
    free_mul,
    genus0_length_gf,
    marchenko_pastur_moments,
    moments_from_r,
    moments_from_s,
    projector_moments,
    r_transform,
    s_transform,
    semicircle_moments,
)
from chordgf.poly import Poly
from chordgf.powerseries import PowerSeries1

s, q = Poly.symbol("s"), Poly.symbol("q")
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
moment_lists = st.lists(fracs, min_size=1, max_size=6).map(lambda xs: PowerSeries1([1] + xs))


def test_semicircle_r_transform_is_z():
    assert r_transform(semicircle_moments(8)) == PowerSeries1.z(7)


def test_point_mass_at_zero_has_zero_r():
    assert r_transform(dirac_moments(0, 6)) == PowerSeries1.zero(5)


def test_projector_r_transform_closed_form():
    order = 6
    z = PowerSeries1.z(order + 1)
    zs1 = z * s - 1
    disc = zs1 * zs1 + z * (4 * s * q)
    closed = ((zs1 + disc.sqrt()) * Fraction(1, 2)).shift_down(1)
    assert r_transform(projector_moments(order)) == closed.truncate(order - 1)


def test_marchenko_pastur_s_transform():
    want = PowerSeries1([(-1) ** i for i in range(6)])
    assert s_transform(marchenko_pastur_moments(6)) == want


def test_dirac_one_has_unit_s_transform():
    assert s_transform(dirac_moments(1, 6)) == PowerSeries1.one(5)


def test_symbolic_s_transform_round_trip():
    nu = projector_moments(5)
    assert moments_from_s(s_transform(nu)) == nu


def test_s_transform_needs_first_moment():
    with pytest.raises(NonInvertibleFirstMoment):
        s_transform(semicircle_moments(4))


def test_free_add_identity():
    assert free_add(semicircle_moments(8), dirac_moments(0, 8)) == semicircle_moments(8)


def test_free_add_reproduces_genus0_polynomials():
    got = free_add(semicircle_moments(8), projector_moments(8))
    assert list(got.coeffs) == golden.genus0_one_backbone()


def test_free_mul_identities():
    mp = marchenko_pastur_moments(6)
    assert free_mul(mp, dirac_moments(1, 6)) == mp
    assert free_mul(dirac_moments(1, 6), dirac_moments(1, 6)) == dirac_moments(1, 6)


def test_free_mul_square_of_marchenko_pastur_is_fuss_catalan():
    got = free_mul(marchenko_pastur_moments(6), marchenko_pastur_moments(6)).rationals()
    assert got == [1, 1, 3, 12, 55, 273, 1428]


def test_genus0_series_catalan():
    assert genus0_length_gf([1] * 6, 5).rationals() == [1, 1, 2, 5, 14, 42]


def test_genus0_series_low_orders():
    s1, s2 = Poly.symbol("s1"), Poly.symbol("s2")
    got = genus0_length_gf([s1, s2], 2)
    assert list(got.coeffs) == [1, s1**2, 2 * s1**2 * s2]


def test_genus0_series_needs_s1():
    with pytest.raises(ZeroLeadingWeight):
        genus0_length_gf([0, 1], 3)


@given(moment_lists)
def test_r_transform_round_trip(m):
    if m.order < 1:
        return
    assert moments_from_r(r_transform(m)) == m


@given(moment_lists)
def test_s_transform_round_trip(m):
    if m.order < 1 or not m[1]:
        return
    assert moments_from_s(s_transform(m)) == m


@given(moment_lists, moment_lists, moment_lists)
def test_free_add_commutative_associative(a, b, c):
    n = min(a.order, b.order, c.order)
    if n < 1:
        return
    a, b, c = a.truncate(n), b.truncate(n), c.truncate(n)
    assert free_add(a, b) == free_add(b, a)
    assert free_add(free_add(a, b), c) == free_add(a, free_add(b, c))
