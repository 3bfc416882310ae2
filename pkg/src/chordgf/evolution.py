"""Exact evolution of the chord-diagram generating functions in the chord count.

Every model is a first-order equation ``dF/dy = (linear + quadratic) F``; the
coefficient of ``y^k`` is obtained from the lower ones by one application of
the operators.  Three spectrum kinds are supported:

* ``POINT``   boundary point spectrum of partial diagrams, variables
  ``s_0, s_1, ...`` (boundary cycles by marked points) and ``t_1, t_2, ...``
  (backbones by vertex count);
* ``LENGTH``  boundary length spectrum of complete diagrams, variables
  ``s_1, s_2, ...`` and a single ``t`` counting backbones (stored as the
  t-spectrum ``b*e_1``);
* ``VERTEX``  vertex spectrum of the perimeter graph of a glued ``2k``-gon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from .poly import Poly
from .powerseries import PowerSeries1
from .spectra import (
    EMPTY,
    DiagramType,
    LengthType,
    Orientability,
    Series,
    Spectrum,
    accumulate,
    partial_derivative,
    series_combine,
    validate_type,
)

HALF = Fraction(1, 2)


class IntegralityViolation(ArithmeticError):
    """A count extracted from a slice is not a non-negative integer."""


class TruncationExceeded(ValueError):
    """Requested data lies outside the computed truncation."""


class MismatchedModels(ValueError):
    pass


class UnsupportedRing(TypeError):
    pass


class SpectrumKind(str, Enum):
    POINT = "point"
    LENGTH = "length"
    VERTEX = "vertex"


@dataclass(frozen=True)
class ModelSpec:
    kind: SpectrumKind
    variant: Orientability = Orientability.ORIENTABLE
    max_k: int = 4
    max_weight: int = 8
    max_b: int = 1

    def __post_init__(self):
        if self.max_k < 0:
            raise ValueError("max_k must be non-negative")
        if self.max_weight < 1 or self.max_b < 1:
            raise ValueError("truncation bounds must be positive")
        if self.kind is SpectrumKind.VERTEX and self.variant is not Orientability.ORIENTABLE:
            raise ValueError("the vertex-spectrum model is only defined in the orientable case")

    @property
    def orientable(self) -> bool:
        return self.variant is Orientability.ORIENTABLE

    def t_ok(self, t: Spectrum) -> bool:
        return t.size() <= self.max_b and t.weight() <= self.max_weight


# --------------------------------------------------------------------------
# raw operators; each accumulates ``scale * op(terms)`` into ``out`` with the
# x exponent shifted by ``dx``


def _d(*pairs) -> dict:
    acc: dict[int, int] = {}
    for i, d in pairs:
        acc[i] = acc.get(i, 0) + d
    return acc


def _join_into(out, terms, scale, dx, shift):
    # L0 (shift=-2) / K0 (shift=+2): replace s_r by a sum of products s_j s_{r'-j}
    # L0: r = i+2 >= 2, pairs j + j' = r - 2, j >= 0, factor r
    # K0: r = i-2 >= 1, pairs j + j' = r + 2, j >= 1, factor r
    lo = 0 if shift < 0 else 1
    for (x, s, t), c in terms.items():
        for r, m in s:
            if r < (2 if shift < 0 else 1):
                continue
            total = r + shift
            base = c * m * r * HALF * scale
            for j in range(lo, total - lo + 1):
                accumulate(out, (x + dx, s.adjust(_d((r, -1), (j, 1), (total - j, 1))), t), base)


def _twist_into(out, terms, scale, dx, shift):
    # L1 (shift=-2): r(r-1)/2 s_{r-2} d/ds_r, r >= 2
    # K1 (shift=+2): r(r+1)/2 s_{r+2} d/ds_r, r >= 1
    for (x, s, t), c in terms.items():
        for r, m in s:
            if shift < 0:
                if r < 2:
                    continue
                f = r * (r - 1)
            else:
                if r < 1:
                    continue
                f = r * (r + 1)
            accumulate(out, (x + dx, s.adjust(_d((r, -1), (r + shift, 1))), t), c * m * f * HALF * scale)


def _cut_into(out, terms, scale, dx, shift):
    # L2 (shift=-2) / K2 (shift=+2): 1/2 sum j j' s_{j+j'+shift} d^2/ds_j ds_j'
    for (x, s, t), c in terms.items():
        idx = [(j, m) for j, m in s if j >= 1]
        for j, mj in idx:
            for j2, mj2 in idx:
                if j == j2:
                    if mj < 2:
                        continue
                    mult = mj * (mj - 1)
                else:
                    mult = mj * mj2
                new = s.adjust(_d((j, -1), (j2, -1), (j + j2 + shift, 1)))
                accumulate(out, (x + dx, new, t), c * mult * j * j2 * HALF * scale)


def _derivative_table(terms):
    """List of (j, x, s - e_j, t, c * m_j) for j >= 1."""
    table = []
    for (x, s, t), c in terms.items():
        for j, m in s:
            if j >= 1:
                table.append((j, x, s.shift(j, -1), t, t.size(), t.weight(), c * m))
    return table


def _bilinear_into(out, a_terms, b_terms, scale, dx, shift, spec: ModelSpec | None):
    # Q (shift=-2) / R (shift=+2): 1/2 sum j j' s_{j+j'+shift} dA/ds_j dB/ds_j'
    da = _derivative_table(a_terms)
    db = _derivative_table(b_terms)
    if not da or not db:
        return
    for j, xa, sa, ta, na, wa, ca in da:
        for j2, xb, sb, tb, nb, wb, cb in db:
            if spec is not None and (na + nb > spec.max_b or wa + wb > spec.max_weight):
                continue
            s = (sa + sb).shift(j + j2 + shift, 1)
            accumulate(out, (xa + xb + dx, s, ta + tb), ca * cb * j * j2 * HALF * scale)


_LINEAR = {
    "L0": (_join_into, -2),
    "L1": (_twist_into, -2),
    "L2": (_cut_into, -2),
    "K0": (_join_into, 2),
    "K1": (_twist_into, 2),
    "K2": (_cut_into, 2),
}
_BILINEAR = {"Q": -2, "R": 2}


def apply_linear_operator(name: str, s: Series) -> Series:
    """Image of ``s`` under L0, L1, L2, K0, K1 or K2 (no x factors applied)."""
    try:
        fn, shift = _LINEAR[name]
    except KeyError:
        raise ValueError(f"unknown linear operator {name!r}") from None
    out: dict = {}
    fn(out, s.terms, Fraction(1), 0, shift)
    return Series._wrap(out)


def apply_bilinear(name: str, a: Series, b: Series) -> Series:
    """Bilinear form of Q or R: ``1/2 sum s_{i-+2} j(i-j) da/ds_j db/ds_{i-j}``."""
    try:
        shift = _BILINEAR[name]
    except KeyError:
        raise ValueError(f"unknown bilinear operator {name!r}") from None
    out: dict = {}
    _bilinear_into(out, a.terms, b.terms, Fraction(1), 0, shift, None)
    return Series._wrap(out)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EvolutionState:
    spec: ModelSpec
    slices: tuple[Series, ...]

    @property
    def k(self) -> int:
        return len(self.slices) - 1

    def slice(self, k: int) -> Series:
        if k < 0:
            return Series()
        if k > self.k:
            raise TruncationExceeded(f"slice {k} not computed (have 0..{self.k})")
        return self.slices[k]


def initial_condition(spec: ModelSpec) -> Series:
    if spec.kind is SpectrumKind.POINT:
        return Series(
            {(-2, Spectrum.e(i), Spectrum.e(i)): 1 for i in range(1, spec.max_weight + 1)}
        )
    if spec.kind is SpectrumKind.LENGTH:
        return Series({(-2, Spectrum.e(1), Spectrum.e(1)): 1})
    return Series({(-2, Spectrum.e(1, 2), EMPTY): 1})


def init_state(spec: ModelSpec) -> EvolutionState:
    return EvolutionState(spec, (initial_condition(spec),))


def _operator_plan(spec: ModelSpec):
    """Linear terms as (operator, x power, factor) and the quadratic term."""
    shift = -2 if spec.kind is SpectrumKind.POINT else 2
    join, twist, cut = _join_into, _twist_into, _cut_into
    if spec.kind is SpectrumKind.VERTEX:
        return [(join, 0, 1), (cut, 2, 1)], None, shift
    if spec.orientable:
        return [(join, 0, 1), (cut, 2, 1)], (2, 1), shift
    return [(join, 0, 1), (twist, 1, 1), (cut, 2, 2)], (2, 2), shift


def step(state: EvolutionState) -> EvolutionState:
    """Append slice k+1 to the state."""
    spec = state.spec
    k = state.k
    linear, quad, shift = _operator_plan(spec)
    out: dict = {}
    cur = state.slices[k].terms
    for fn, dx, factor in linear:
        fn(out, cur, Fraction(factor), dx, shift)
    if quad is not None and spec.max_b > 1:
        dx, factor = quad
        for a in range(0, k // 2 + 1):
            b = k - a
            # the bilinear form is symmetric, so off-diagonal pairs count twice
            mult = factor if a == b else 2 * factor
            _bilinear_into(
                out, state.slices[a].terms, state.slices[b].terms, Fraction(mult), dx, shift, spec
            )
    inv = Fraction(1, k + 1)
    new = {key: c * inv for key, c in out.items() if spec.t_ok(key[2])}
    return EvolutionState(spec, state.slices + (Series._wrap(new),))


def evolve(spec: ModelSpec, max_k: int | None = None) -> EvolutionState:
    state = init_state(spec)
    target = spec.max_k if max_k is None else max_k
    for _ in range(target):
        state = step(state)
    return state


# --------------------------------------------------------------------------
# counts


def x_exponent(t: DiagramType) -> int:
    return t.genus - 2 if t.orientability is Orientability.NON_ORIENTABLE else 2 * t.genus - 2


def _check_integral(value: Fraction, what) -> int:
    if value.denominator != 1 or value < 0:
        raise IntegralityViolation(f"non-integral count {value} for {what}")
    return int(value)


def extract_count(state: EvolutionState, t: DiagramType) -> int:
    """Number of connected diagrams of type ``t`` according to the evolved series.

    Point model: keyed by the backbone and boundary point spectra.  Length
    model: keyed by the boundary length spectrum and the number of backbones
    only (the count is summed over all backbone spectra with b backbones).
    """
    spec = state.spec
    if not validate_type(t):
        raise ValueError(f"inconsistent type {t}")
    want = Orientability.ORIENTABLE if spec.orientable else Orientability.NON_ORIENTABLE
    if t.orientability is not want:
        raise MismatchedModels(f"type is {t.orientability.value}, model is {spec.variant.value}")
    b = t.b.size()
    if spec.kind is SpectrumKind.POINT:
        key = (x_exponent(t), t.n, t.b)
        tspec = t.b
    elif spec.kind is SpectrumKind.LENGTH:
        if t.l != 0 or t.p is None:
            raise ValueError("the length model counts complete diagrams with a length spectrum")
        tspec = Spectrum.e(1, b)
        key = (x_exponent(t), t.p, tspec)
    else:
        raise MismatchedModels("use count_at for the vertex model")
    if t.k > state.k or not spec.t_ok(tspec):
        raise TruncationExceeded(f"type {t} outside computed bounds")
    coeff = state.slices[t.k].coefficient_of(key)
    return _check_integral(coeff * math.factorial(b), t)


def count_at(state: EvolutionState, k: int, x: int, s: Spectrum, t: Spectrum) -> int:
    """``size(t)! * [y^k x^x s^s t^t]`` (vertex model: the bare coefficient)."""
    if k > state.k:
        raise TruncationExceeded(f"slice {k} not computed")
    coeff = state.slices[k].coefficient_of((x, s, t))
    if state.spec.kind is not SpectrumKind.VERTEX:
        coeff *= math.factorial(t.size())
    return _check_integral(coeff, (k, x, s, t))


def check_integrality(state: EvolutionState) -> bool:
    vertex = state.spec.kind is SpectrumKind.VERTEX
    for sl in state.slices:
        for (_, _, t), c in sl.terms.items():
            v = c if vertex else c * math.factorial(t.size())
            if v.denominator != 1 or v < 0:
                return False
    return True


def count_table(state: EvolutionState):
    """Yield ``(type, count)`` for every term of every slice.

    Types are :class:`DiagramType` (point model), :class:`LengthType` (length
    model) or ``(k, x, s, t)`` tuples (vertex model).
    """
    spec = state.spec
    orient = Orientability.ORIENTABLE if spec.orientable else Orientability.NON_ORIENTABLE
    for k, sl in enumerate(state.slices):
        for (x, s, t), c in sl:
            if spec.kind is SpectrumKind.VERTEX:
                yield (k, x, s, t), _check_integral(c, (k, x, s, t))
                continue
            b = t.size()
            count = _check_integral(c * math.factorial(b), (k, x, s, t))
            genus = (x + 2) // 2 if spec.orientable else x + 2
            if spec.kind is SpectrumKind.POINT:
                dt = DiagramType(orient, genus, k, s.weight(), t, s)
            else:
                dt = LengthType(orient, genus, k, b, s)
            yield dt, count


# --------------------------------------------------------------------------
# independent one-backbone recursion (point spectrum, orientable)


def one_backbone_recursion(g: int, k: int, l: int, n: Spectrum, memo: dict | None = None) -> int:
    """Count one-backbone diagrams of type ``{g, k, l; e_{2k+l}; n}`` by chord removal.

    ``k N(g,k,l;n)`` is expressed through diagrams with one chord fewer,
    either on the same genus (two boundary components merged) or on genus
    ``g - 1`` (one boundary component split).
    """
    if memo is None:
        return _recursion_cached(g, k, l, n)
    key = (g, k, l, n)
    if key not in memo:
        memo[key] = _recursion(g, k, l, n, lambda *a: one_backbone_recursion(*a, memo=memo))
    return memo[key]


@lru_cache(maxsize=None)
def _recursion_cached(g, k, l, n):
    return _recursion(g, k, l, n, _recursion_cached)


def _recursion(g: int, k: int, l: int, n: Spectrum, rec) -> int:
    if g < 0 or k < 0 or l < 0 or n.weight() != l:
        return 0
    if k == 0:
        return 1 if g == 0 and n == Spectrum.e(l) else 0
    nd = n.as_dict()

    def nn(i):
        return nd.get(i, 0)

    twice = 0  # 2 k N
    # chord joins two boundary components with j and i-j marked points
    for j, mj in n:
        for j2, mj2 in n:
            if j == j2 and mj < 2:
                continue
            i = j + j2
            try:
                m = n.adjust(_d((j, -1), (j2, -1), (i + 2, 1)))
            except ValueError:
                continue
            twice += (i + 2) * (nn(i + 2) + 1) * rec(g, k - 1, l + 2, m)
    # chord traversed twice by one boundary component with i marked points
    if g >= 1:
        for i, _ in n:
            for j in range(1, i + 2):
                j2 = i + 2 - j
                f1 = nn(j) + 1 + (1 if j == j2 else 0) - (1 if i == j else 0)
                f2 = nn(j2) + 1 - (1 if j == 2 else 0)
                if f1 <= 0 or f2 <= 0:
                    continue
                m = n.adjust(_d((j, 1), (j2, 1), (i, -1)))
                twice += j * j2 * f1 * f2 * rec(g - 1, k - 1, l + 2, m)
    if twice % (2 * k):
        raise IntegralityViolation(f"recursion not divisible at {(g, k, l, n)}")
    return twice // (2 * k)


# --------------------------------------------------------------------------
# specialisation


Assignment = Callable[[int], object] | Mapping[int, object]


def _ring_value(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise UnsupportedRing(f"value {v!r} is not a rational or a polynomial")
    return Poly.const(v)


def _lookup(assign: Assignment, i: int):
    if callable(assign):
        return _ring_value(assign(i))
    if i not in assign:
        raise UnsupportedRing(f"no value assigned to index {i}")
    return _ring_value(assign[i])


def specialize(
    state: EvolutionState,
    s_assign: Assignment,
    t_assign: Assignment,
    x_value=None,
    y_value=None,
    slices: range | None = None,
) -> Poly:
    """Substitute values for the variables of the generating function.

    ``x_value`` and ``y_value`` default to the formal symbols ``x`` and ``y``.
    The sum is finite because each slice is a polynomial.
    """
    x_val = Poly.symbol("x") if x_value is None else _ring_value(x_value)
    y_val = Poly.symbol("y") if y_value is None else _ring_value(y_value)
    s_cache: dict[int, Poly] = {}
    t_cache: dict[int, Poly] = {}

    def sv(i):
        if i not in s_cache:
            s_cache[i] = _lookup(s_assign, i)
        return s_cache[i]

    def tv(i):
        if i not in t_cache:
            t_cache[i] = _lookup(t_assign, i)
        return t_cache[i]

    total = Poly()
    ks = range(len(state.slices)) if slices is None else slices
    for k in ks:
        acc = Poly()
        for (x, s, t), c in state.slices[k].terms.items():
            v = Poly.const(c) * x_val ** x
            for i, m in s:
                v = v * sv(i) ** m
            for i, m in t:
                v = v * tv(i) ** m
            acc = acc + v
        total = total + acc * y_val ** k
    return total


def specialize_series(state: EvolutionState, s_assign: Assignment, t_assign: Assignment, x_value=1) -> PowerSeries1:
    """Like :func:`specialize` but returns the series in ``y`` slice by slice."""
    coeffs = [
        specialize(state, s_assign, t_assign, x_value=x_value, y_value=1, slices=range(k, k + 1))
        for k in range(len(state.slices))
    ]
    return PowerSeries1(coeffs)


def genus0_one_backbone_polynomials(state: EvolutionState, m_max: int) -> list[Poly]:
    """Genus-0 one-backbone polynomials in ``q, s`` indexed by the vertex count m.

    Substitutes ``s_0 = 1, s_i = q (ys)^i, t_j = 1`` into ``x^2 F_1(x, y^2)`` at
    ``x = 0``.  The ``m = 0`` entry is the empty backbone (value 1), which the
    initial condition does not contain.
    """
    spec = state.spec
    if spec.kind is not SpectrumKind.POINT or not spec.orientable:
        raise MismatchedModels("needs the orientable point model")
    if spec.max_weight < m_max or state.k < m_max // 2:
        raise TruncationExceeded("state too small for the requested m")
    q, s, y = Poly.symbol("q"), Poly.symbol("s"), Poly.symbol("y")
    # every t_j is set to 1, so multi-backbone terms must be removed first
    poly = specialize(
        one_backbone(state),
        lambda i: Poly.const(1) if i == 0 else q * (y * s) ** i,
        {i: 1 for i in range(1, spec.max_weight + 1)},
        x_value=Poly.symbol("x"),
        y_value=y ** 2,
    )
    coeffs = poly.coefficient("x", -2).coefficients("y", m_max)
    coeffs[0] = coeffs[0] + 1
    return coeffs


def one_backbone(state: EvolutionState) -> EvolutionState:
    """Copy of the state restricted to terms with exactly one backbone."""
    slices = tuple(sl.filter(lambda key: key[2].size() == 1) for sl in state.slices)
    return EvolutionState(state.spec, slices)


def length_gf_by_genus_backbones(state: EvolutionState, s_assign: Assignment, order: int | None = None):
    """``{(g_or_h, b): [coefficient of y^k]}`` of the specialised length-model function.

    Coefficients keep the ``1/b!`` of the generating function.
    """
    if state.spec.kind is not SpectrumKind.LENGTH:
        raise MismatchedModels("needs the length model")
    kmax = state.k if order is None else min(order, state.k)
    out: dict[tuple[int, int], list[Fraction]] = {}
    cache: dict[int, Fraction] = {}
    for k in range(kmax + 1):
        for (x, s, t), c in state.slices[k].terms.items():
            v = Fraction(c)
            for i, m in s:
                if i not in cache:
                    val = s_assign(i) if callable(s_assign) else s_assign.get(i, 0)
                    cache[i] = Fraction(val)
                v *= cache[i] ** m
            if not v:
                continue
            genus = (x + 2) // 2 if state.spec.orientable else x + 2
            row = out.setdefault((genus, t.size()), [Fraction(0)] * (kmax + 1))
            row[k] += v
    return out


def chord_diagram_series(state: EvolutionState, order: int | None = None):
    """``C_{g,b}(y) = (1/b!) sum_k C_{g,b,k} y^k`` from ``G(x, y, t; 1, 1, ...)``."""
    return length_gf_by_genus_backbones(state, lambda i: 1, order)


def shape_series(state: EvolutionState, order: int | None = None):
    """``S_{g,b}(y) = y^b G_{g,b}(y; 0, 0, 1, 1, ...)``; ``S_{0,1}(y) = y``.

    Shapes arise from diagrams without boundary cycles of length 1 or 2 by
    adding one rainbow chord per backbone, hence the ``y^b`` shift.  The
    single-chord diagram is the only genus-0 one-backbone shape.
    """
    kmax = state.k if order is None else order
    base = length_gf_by_genus_backbones(state, lambda i: 0 if i < 3 else 1, state.k)
    out: dict[tuple[int, int], list[Fraction]] = {}
    for (g, b), row in base.items():
        shifted = [Fraction(0)] * (kmax + 1)
        for k, c in enumerate(row):
            if k + b <= kmax:
                shifted[k + b] = c
        out[(g, b)] = shifted
    single = [Fraction(0)] * (kmax + 1)
    if kmax >= 1:
        single[1] = Fraction(1)
    out[(0, 1)] = single
    return out


def harer_zagier_numbers(state: EvolutionState) -> dict[tuple[int, int], int]:
    """``C_{g,1,n}``: one-backbone complete diagrams of genus g with n chords."""
    table = chord_diagram_series(state)
    out = {}
    for (g, b), row in table.items():
        if b != 1:
            continue
        for n, c in enumerate(row):
            out[(g, n)] = _check_integral(c, (g, n))
    return out


# --------------------------------------------------------------------------
# vertex spectrum relation


def lambda1(series: Series) -> Series:
    """``Lambda_1 = sum_i i s_{i+1} d/ds_i``."""
    out: dict = {}
    for (x, s, t), c in series.terms.items():
        for i, m in s:
            if i >= 1:
                accumulate(out, (x, s.adjust(_d((i, -1), (i + 1, 1))), t), c * m * i)
    return Series._wrap(out)


def lambda1_check(state_vertex: EvolutionState, state_length: EvolutionState) -> bool:
    """``1/2 Lambda_1 Fhat^(k-1) == k G_1^(k)`` for every computed k >= 1."""
    if state_vertex.spec.kind is not SpectrumKind.VERTEX or state_length.spec.kind is not SpectrumKind.LENGTH:
        raise MismatchedModels("expects a vertex-model state and a length-model state")
    if not state_length.spec.orientable:
        raise MismatchedModels("the relation holds for the orientable length model")
    kmax = min(state_vertex.k + 1, state_length.k)
    one = Spectrum.e(1)
    for k in range(1, kmax + 1):
        lhs = series_combine([(HALF, lambda1(state_vertex.slices[k - 1]))])
        g1 = {
            (x, s, EMPTY): c * k
            for (x, s, t), c in state_length.slices[k].terms.items()
            if t == one
        }
        if lhs != Series(g1):
            return False
    return True


__all__ = [
    "HALF",
    "IntegralityViolation",
    "TruncationExceeded",
    "MismatchedModels",
    "UnsupportedRing",
    "SpectrumKind",
    "ModelSpec",
    "EvolutionState",
    "apply_linear_operator",
    "apply_bilinear",
    "initial_condition",
    "init_state",
    "step",
    "evolve",
    "extract_count",
    "count_at",
    "count_table",
    "check_integrality",
    "one_backbone_recursion",
    "specialize",
    "specialize_series",
    "genus0_one_backbone_polynomials",
    "one_backbone",
    "chord_diagram_series",
    "shape_series",
    "harer_zagier_numbers",
    "lambda1",
    "lambda1_check",
    "partial_derivative",
]
