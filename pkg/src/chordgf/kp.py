"""KP residuals on evolved generating functions and the boson operator identities.

The residuals are exact: the state is folded at ``x = 1`` and ``s_0`` is kept
symbolic.  ``normalization="s"`` differentiates in ``s_i`` literally;
``normalization="times"`` uses the KP times ``t_i = s_i / i`` that match the
boson operators ``a_{-i} = i d/ds_i``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .evolution import EvolutionState, SpectrumKind, TruncationExceeded, apply_linear_operator
from .spectra import EMPTY, Series, Spectrum, accumulate, partial_derivative, series_combine, series_mul

DerivativeOrder = tuple  # sorted indices, e.g. (1, 1, 3) for d^3/ds_1^2 ds_3


def derivative_order(spec: str | Iterable[int]) -> DerivativeOrder:
    """``"3111"`` or ``[3, 1, 1, 1]`` -> ``(1, 1, 1, 3)``."""
    if isinstance(spec, str):
        spec = [int(ch) for ch in spec]
    order = tuple(sorted(spec))
    if any(i < 0 for i in order):
        raise ValueError("derivative indices must be non-negative")
    return order


def _F(*names: str) -> tuple[DerivativeOrder, ...]:
    return tuple(derivative_order(n) for n in names)


F = Fraction
# left side minus right side as (coefficient, factors)
KP_EQUATIONS: dict[int, list[tuple[Fraction, tuple[DerivativeOrder, ...]]]] = {
    1: [
        (F(1), _F("22")),
        (F(1, 2), _F("11", "11")),
        (F(-1), _F("31")),
        (F(1, 12), _F("1111")),
    ],
    2: [
        (F(1), _F("32")),
        (F(1), _F("11", "21")),
        (F(-1), _F("41")),
        (F(1, 6), _F("2111")),
    ],
    3: [
        (F(1), _F("42")),
        (F(1, 2), _F("21", "21")),
        (F(1), _F("11", "31")),
        (F(-1), _F("51")),
        (F(-1, 8), _F("111", "111")),
        (F(-1, 12), _F("11", "1111")),
        (F(1, 4), _F("3111")),
        (F(-1, 120), _F("111111")),
    ],
    4: [
        (F(1), _F("33")),
        (F(-1, 3), _F("11", "11", "11")),
        (F(1), _F("21", "21")),
        (F(1), _F("11", "31")),
        (F(-1), _F("51")),
        (F(-1, 4), _F("111", "111")),
        (F(-1, 3), _F("11", "1111")),
        (F(1, 3), _F("3111")),
        (F(-1, 45), _F("111111")),
    ],
}


def derivative(series: Series, order: DerivativeOrder, normalization: str = "s") -> Series:
    out = series
    scale = Fraction(1)
    for i in order:
        out = partial_derivative(out, i)
        if normalization == "times":
            scale *= i
        elif normalization != "s":
            raise ValueError(f"unknown normalization {normalization!r}")
    return out * scale if scale != 1 else out


def _t_bounds(state: EvolutionState) -> tuple[int, int]:
    return state.spec.max_b, state.spec.max_weight


def kp_residual(
    state: EvolutionState,
    equation: int,
    y_order: int,
    t_order: int,
    normalization: str = "s",
) -> Series:
    """Left minus right side of a KP equation at ``y^y_order``, ``x = 1``.

    Only t-monomials with at most ``t_order`` factors (and within the state's
    weight bound) are kept; every contribution to them is available.
    """
    if state.spec.kind is SpectrumKind.VERTEX:
        raise ValueError("KP checks apply to the point and length models")
    if equation not in KP_EQUATIONS:
        raise ValueError("equation must be 1, 2, 3 or 4")
    max_b, max_w = _t_bounds(state)
    if y_order > state.k or t_order > max_b:
        raise TruncationExceeded("state does not reach the requested orders")

    def t_ok(t: Spectrum) -> bool:
        return t.size() <= t_order and t.weight() <= max_w

    slices = [state.slices[k].fold_x().filter(lambda key: t_ok(key[2])) for k in range(y_order + 1)]
    cache: dict = {}

    def d(k: int, order: DerivativeOrder) -> Series:
        key = (k, order)
        if key not in cache:
            cache[key] = derivative(slices[k], order, normalization)
        return cache[key]

    pieces = []
    for coef, factors in KP_EQUATIONS[equation]:
        if len(factors) == 1:
            pieces.append((coef, d(y_order, factors[0])))
            continue
        for split in _compositions(y_order, len(factors)):
            prod = d(split[0], factors[0])
            for k, order in zip(split[1:], factors[1:]):
                prod = series_mul(prod, d(k, order), t_filter=t_ok)
            pieces.append((coef, prod))
    return series_combine(pieces)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


# --------------------------------------------------------------------------
# boson operators


def _apply_a(i: int, series: Series) -> Series:
    if i == 0:
        return Series()
    if i > 0:
        out: dict = {}
        for (x, s, t), c in series.terms.items():
            accumulate(out, (x, s.shift(i, 1), t), c)
        return Series._wrap(out)
    return partial_derivative(series, -i) * (-i)


def _apply_word(word: Sequence[int], series: Series) -> Series:
    # word is written left to right; the rightmost operator acts first
    for i in reversed(word):
        series = _apply_a(i, series)
        if not series:
            break
    return series


def _weight(series: Series) -> int:
    return max((s.weight() for (_, s, _), _ in series.terms.items()), default=0)


def apply_lambda(m: int, series: Series) -> Series:
    """``Lambda_m = 1/2 sum_i a_i a_{m-i}`` (no ordering needed for m != 0)."""
    if m == 0:
        raise ValueError("Lambda_0 needs a normal-ordering convention; not used here")
    w = _weight(series)
    pieces = []
    for i in range(-w, m + w + 1):
        pieces.append((Fraction(1, 2), _apply_word((i, m - i), series)))
    return series_combine(pieces)


def apply_m(m: int, series: Series) -> Series:
    """``M_m = 1/6 sum_{i,j} :a_i a_j a_{m-i-j}:``, annihilators rightmost."""
    w = _weight(series)
    lo, hi = -w, m + w
    pieces = []
    for i, j in itertools.product(range(lo, hi + 1), repeat=2):
        l = m - i - j
        if not (lo <= l <= hi):
            continue
        word = tuple(sorted((i, j, l), reverse=True))
        pieces.append((Fraction(1, 6), _apply_word(word, series)))
    return series_combine(pieces)


def s_monomials(max_weight: int, max_s0: int = 2) -> list[Series]:
    """Every monomial in ``s_0..s_w`` of weight <= max_weight, ``s_0`` degree <= max_s0."""

    def parts(rest: int, i: int):
        if i > rest:
            yield {}
            return
        for m in range(rest // i + 1):
            for tail in parts(rest - m * i, i + 1):
                yield {i: m, **tail} if m else tail

    out = []
    for p in parts(max_weight, 1):
        for e0 in range(max_s0 + 1):
            out.append(Series.monomial(0, Spectrum({0: e0, **p}), EMPTY))
    return out


def point_identity_sides(series: Series) -> tuple[Series, Series]:
    """``(L0 + L2) f`` and ``(s0^2 d/ds2 + s0 Lambda_{-2} + M_{-2}) f``."""
    lhs = apply_linear_operator("L0", series) + apply_linear_operator("L2", series)
    s0sq = Series.monomial(0, Spectrum.e(0, 2), EMPTY)
    s0 = Series.monomial(0, Spectrum.e(0), EMPTY)
    rhs = (
        series_mul(s0sq, partial_derivative(series, 2))
        + series_mul(s0, apply_lambda(-2, series))
        + apply_m(-2, series)
    )
    return lhs, rhs


def length_identity_sides(series: Series) -> tuple[Series, Series]:
    """``(K0 + K2) f`` and ``M_2 f``."""
    lhs = apply_linear_operator("K0", series) + apply_linear_operator("K2", series)
    return lhs, apply_m(2, series)


def operator_identity_check(which: str, test_degree: int = 10) -> bool:
    sides = {"point": point_identity_sides, "length": length_identity_sides}[which]
    for mono in s_monomials(test_degree):
        lhs, rhs = sides(mono)
        if lhs != rhs:
            return False
    return True
