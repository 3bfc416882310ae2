from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chordgf.poly import Poly, parse_poly
from chordgf.powerseries import NonInvertibleCoefficient, PowerSeries1, from_sequence

q, s = Poly.symbol("q"), Poly.symbol("s")

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=5)
polys = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), fracs), max_size=4).map(
    lambda ts: sum((Poly.const(c) * q**i * s**j for i, j, c in ts), Poly())
)


def test_parse_implicit_products():
    p = parse_poly("q s^4 + (4 q + 2 q^2) s^2 + 2", ["q", "s"])
    assert p == q * s**4 + (4 * q + 2 * q**2) * s**2 + 2
    assert parse_poly("10s0s8+5s4^2", ["s0", "s8", "s4"]) == parse_poly("10*s0*s8+5*s4^2", ["s0", "s8", "s4"])


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly()


def test_coefficients_and_evaluate():
    p = 3 * q**2 * s + s
    assert p.coefficient("q", 2) == 3 * s
    assert p.coefficients("q", 2) == [s, Poly(), 3 * s]
    assert p.evaluate({"q": 1, "s": Fraction(1, 2)}) == 2


def test_monomial_inverse():
    assert (2 * q).inverse() * (2 * q) == 1
    with pytest.raises(ZeroDivisionError):
        (q + 1).inverse()


series = st.lists(fracs, min_size=1, max_size=7)


@given(series)
def test_inverse_round_trip(cs):
    cs[0] = cs[0] or Fraction(1)
    a = from_sequence(cs)
    assert a * a.inverse() == PowerSeries1.one(a.order)


def test_inverse_needs_unit_constant():
    with pytest.raises(NonInvertibleCoefficient):
        PowerSeries1([0, 1]).inverse()
    with pytest.raises(NonInvertibleCoefficient):
        PowerSeries1([q + 1, 1]).inverse()


@given(series)
def test_sqrt_squares_back(cs):
    cs[0] = 1
    a = from_sequence(cs)
    r = a.sqrt()
    assert r * r == a


def test_sqrt_needs_unit_constant():
    with pytest.raises(ValueError):
        PowerSeries1([4, 1]).sqrt()


@given(series)
def test_reversion_is_compositional_inverse(cs):
    cs = [Fraction(0), cs[0] or Fraction(1)] + cs[1:]
    f = from_sequence(cs)
    z = PowerSeries1.z(f.order)
    assert f.compose(f.reversion()) == z
    assert f.reversion().compose(f) == z


def test_reversion_with_symbolic_monomial_linear_term():
    f = PowerSeries1([0, q, s, 1], 4)
    assert f.compose(f.reversion()) == PowerSeries1.z(4)


def test_reversion_guards():
    with pytest.raises(ValueError):
        PowerSeries1([1, 1]).reversion()
    with pytest.raises(NonInvertibleCoefficient):
        PowerSeries1([0, 0, 1]).reversion()


def test_json_is_exact():
    a = PowerSeries1([Fraction(1, 3), q])
    assert a.to_json() == ["1/3", "q"]
