import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chordgf import golden
from chordgf.checks import spectra_of_size
from chordgf.evolution import (
    MismatchedModels,
    ModelSpec,
    SpectrumKind,
    TruncationExceeded,
    UnsupportedRing,
    apply_bilinear,
    apply_linear_operator,
    check_integrality,
    chord_diagram_series,
    count_at,
    count_table,
    evolve,
    extract_count,
    harer_zagier_numbers,
    init_state,
    lambda1_check,
    one_backbone_recursion,
    genus0_one_backbone_polynomials,
    shape_series,
    specialize,
    specialize_series,
)
from chordgf.poly import Poly
from chordgf.spectra import EMPTY, DiagramType, LengthType, Orientability, Series, Spectrum, validate_type

O, NO = Orientability.ORIENTABLE, Orientability.NON_ORIENTABLE
POINT, LENGTH, VERTEX = SpectrumKind.POINT, SpectrumKind.LENGTH, SpectrumKind.VERTEX
e = Spectrum.e


def mono(s, t=EMPTY, x=0, c=1):
    return Series.monomial(x, s, t, c)


@pytest.fixture(scope="module")
def point_o():
    return evolve(ModelSpec(POINT, O, max_k=4, max_weight=8, max_b=2))


@pytest.fixture(scope="module")
def point_no():
    return evolve(ModelSpec(POINT, NO, max_k=5, max_weight=10, max_b=1))


@pytest.fixture(scope="module")
def length_o():
    return evolve(ModelSpec(LENGTH, O, max_k=5, max_weight=2, max_b=2))


def test_model_spec_guards():
    with pytest.raises(ValueError):
        ModelSpec(VERTEX, NO)
    with pytest.raises(ValueError):
        ModelSpec(POINT, O, max_k=-1)
    with pytest.raises(ValueError):
        ModelSpec(POINT, O, max_weight=0)


def test_initial_conditions():
    assert init_state(ModelSpec(POINT, max_weight=5)).slices[0].coefficient_of((-2, e(5), e(5))) == 1
    assert init_state(ModelSpec(LENGTH)).slices[0] == mono(e(1), e(1), -2)
    assert init_state(ModelSpec(VERTEX)).slices[0] == mono(e(1, 2), EMPTY, -2)


@pytest.mark.parametrize(
    "name, arg, want",
    [
        ("L0", mono(e(2)), mono(e(0, 2))),
        ("L1", mono(e(2)), mono(e(0))),
        ("L2", mono(e(1, 2)), mono(e(0))),
        ("K0", mono(e(1)), mono(e(1) + e(2))),
        ("K2", mono(e(1, 2)), mono(e(4))),
    ],
)
def test_linear_operator_examples(name, arg, want):
    assert apply_linear_operator(name, arg) == want


def test_bilinear_examples():
    a = mono(e(1), e(1))
    assert apply_bilinear("Q", a, a) == mono(e(0), e(1, 2), c=Fraction(1, 2))
    b = mono(e(1), e(1))
    assert apply_bilinear("R", b, b) == mono(e(4), e(1, 2), c=Fraction(1, 2))
    assert not apply_bilinear("Q", a, mono(EMPTY))


def test_first_step_point_model(point_o):
    assert point_o.slices[1].coefficient_of((-2, e(0, 2), e(2))) == 1


def test_square_gluing_genus_one(point_o):
    assert count_at(point_o, 2, 0, e(0), e(4)) == 1


def test_first_step_length_model(length_o):
    one_chord = length_o.slices[1].filter(lambda key: key[2] == e(1))
    assert one_chord == mono(e(1) + e(2), e(1), -2)


def test_extract_count_examples(point_o, point_no):
    assert extract_count(point_o, DiagramType(O, 0, 2, 0, e(4), e(0, 3))) == 2
    assert extract_count(point_o, DiagramType(O, 1, 2, 0, e(4), e(0))) == 1
    # decagon, one chord, one boundary carrying 8 marked points: 45
    total = sum(c for (x, s, t), c in point_no.slices[1].terms.items() if t == e(10) and s == e(8))
    assert total == 45


def test_extract_count_guards(point_o, length_o):
    with pytest.raises(MismatchedModels):
        extract_count(point_o, DiagramType(NO, 1, 1, 0, e(2), e(0)))
    with pytest.raises(TruncationExceeded):
        extract_count(point_o, DiagramType(O, 0, 5, 0, e(10), e(0, 6)))
    with pytest.raises(ValueError):
        extract_count(point_o, DiagramType(O, 0, 2, 0, e(4), e(0, 2)))
    t = DiagramType(O, 0, 1, 0, e(2), e(0, 2), e(1) + e(2))
    assert extract_count(length_o, t) == 1


def test_every_slice_integral(point_o, point_no, length_o):
    for st_ in (point_o, point_no, length_o):
        assert check_integrality(st_)
        for t, c in count_table(st_):
            assert c > 0
            if isinstance(t, LengthType):
                assert t.p.weight() == 2 * t.k + t.backbones
                assert t.backbones - t.k + t.p.size() == 2 - 2 * t.genus
            else:
                assert validate_type(t)


def test_length_weight_relation(length_o):
    for k, sl in enumerate(length_o.slices):
        for (_, s, t), _ in sl:
            assert s.weight() == 2 * k + t.size()


def test_point_degree_bookkeeping(point_o):
    for k, sl in enumerate(point_o.slices):
        for (x, s, t), _ in sl:
            g = (x + 2) // 2
            assert s.weight() == t.weight() - 2 * k
            assert s.size() == k - 2 * g - t.size() + 2


def test_non_orientable_dominates(point_o, point_no):
    for k in range(point_o.k + 1):
        for (x, s, t), c in point_o.slices[k].terms.items():
            if t.size() != 1:
                continue
            g = (x + 2) // 2
            assert point_no.slices[k].coefficient_of((2 * g - 2, s, t)) >= c


@pytest.mark.parametrize(
    "g, k, l, n, want", [(0, 1, 0, e(0, 2), 1), (1, 2, 0, e(0), 1), (0, 0, 3, e(3), 1), (0, 0, 3, e(2), 0)]
)
def test_recursion_examples(g, k, l, n, want):
    assert one_backbone_recursion(g, k, l, n) == want


def test_recursion_rebuilds_genus0_polynomial_m6():
    q, s = Poly.symbol("q"), Poly.symbol("s")
    total = Poly()
    m = 6
    for k in range(m // 2 + 1):
        l = m - 2 * k
        # genus 0 has k + 1 boundary cycles
        for n in spectra_of_size(l, k + 1):
            c = one_backbone_recursion(0, k, l, n)
            total = total + Poly.const(c) * q ** (n.size() - n.get(0)) * s**l
    assert total == golden.genus0_one_backbone()[6]


def test_genus0_polynomial_list(point_o):
    assert genus0_one_backbone_polynomials(point_o, 8) == golden.genus0_one_backbone()


def test_specialize_needs_values(point_o):
    with pytest.raises(UnsupportedRing):
        specialize(point_o, {}, {})
    with pytest.raises(UnsupportedRing):
        specialize(point_o, lambda i: 1.5, lambda i: 1)


def test_specialize_series_matches_slices(length_o):
    ser = specialize_series(length_o, lambda i: 1, lambda i: 1)
    full = specialize(length_o, lambda i: 1, lambda i: 1, x_value=1, y_value=Poly.symbol("y"))
    assert [ser[k] for k in range(length_o.k + 1)] == full.coefficients("y", length_o.k)


def test_chord_diagram_series_genus0_is_catalan(length_o):
    row = chord_diagram_series(length_o)[(0, 1)]
    assert row == golden.CATALAN[: length_o.k + 1]


def test_single_chord_shape(length_o):
    assert shape_series(length_o)[(0, 1)][:3] == [0, 1, 0]


def test_harer_zagier_small(length_o):
    hz = harer_zagier_numbers(length_o)
    assert hz[(1, 2)] == 1 and hz[(1, 3)] == 10 and hz[(2, 4)] == 21


def test_lambda1_relation():
    v = lambda k: evolve(ModelSpec(VERTEX, max_k=k, max_weight=1, max_b=1))
    g = lambda k: evolve(ModelSpec(LENGTH, max_k=k, max_weight=1, max_b=1))
    assert lambda1_check(v(0), g(0))
    assert lambda1_check(v(1), g(2))
    with pytest.raises(MismatchedModels):
        lambda1_check(g(1), v(1))


@given(st.integers(1, 6))
def test_total_one_backbone_point_count_is_matching_count(m):
    state = evolve(ModelSpec(POINT, NO, max_k=m // 2, max_weight=m, max_b=1))
    for k in range(m // 2 + 1):
        total = sum(c for (_, _, t), c in state.slices[k].terms.items() if t == e(m))
        # every chord may be twisted or not
        assert total == math.comb(m, 2 * k) * math.prod(range(1, 2 * k, 2)) * 2**k
