"""Named verification suites shared by the CLI and the acceptance tests.

Each suite returns a list of :class:`CheckResult`.  The ``criterion`` field is
the acceptance criterion number the check belongs to ("11c*" marks an extra
check that is not one of the numbered criteria).
"""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import golden
from .evolution import (
    ModelSpec,
    SpectrumKind,
    evolve,
    harer_zagier_numbers,
    chord_diagram_series,
    lambda1,
    lambda1_check,
    one_backbone_recursion,
    genus0_one_backbone_polynomials,
    shape_series,
)
from .freeprob import free_add, genus0_length_gf, projector_moments, semicircle_moments
from .kp import kp_residual, operator_identity_check, derivative
from .matrix_model import Ensemble, EnsembleConfig, exact_moment, sample_moments
from .oracle import length_counts, point_counts
from .poly import Poly
from .powerseries import PowerSeries1
from .spectra import Orientability, Series, Spectrum

ORIENTABLE = Orientability.ORIENTABLE
NON_ORIENTABLE = Orientability.NON_ORIENTABLE


@dataclass
class CheckResult:
    criterion: str
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _timed(criterion: str, name: str, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    return CheckResult(criterion, name, bool(ok), detail, time.perf_counter() - t0)


def series_to_poly(series: Series, name=lambda i: f"s{i}") -> Poly:
    """Forget x and t; s-monomials become polynomials in named symbols."""
    out: dict = {}
    for (_, s, _), c in series.terms.items():
        mono = tuple(sorted((name(i), m) for i, m in s))
        out[mono] = out.get(mono, 0) + c
    return Poly(out)


def _genus(x: int, orientable: bool) -> int:
    return (x + 2) // 2 if orientable else x + 2


# --------------------------------------------------------------------------
# golden tables


def check_genus0_polynomials() -> tuple[bool, dict]:
    state = evolve(ModelSpec(SpectrumKind.POINT, ORIENTABLE, max_k=4, max_weight=8, max_b=1))
    got = genus0_one_backbone_polynomials(state, 8)
    want = golden.genus0_one_backbone()
    bad = {m: {"got": repr(g), "want": repr(w)} for m, (g, w) in enumerate(zip(got, want)) if g != w}
    return not bad, {"compared": len(want), "mismatches": bad}


def check_decagon() -> tuple[bool, dict]:
    state = evolve(ModelSpec(SpectrumKind.POINT, NON_ORIENTABLE, max_k=5, max_weight=10, max_b=1))
    e10 = Spectrum.e(10)
    want = golden.decagon_non_orientable()
    bad = {}
    for k, w in enumerate(want):
        sl = state.slices[k].fold_x().filter(lambda key: key[2] == e10)
        g = series_to_poly(sl)
        if g != w:
            bad[k] = {"got": repr(g), "want": repr(w)}
    return not bad, {"compared": len(want), "mismatches": bad}


def suite_golden(**_) -> list[CheckResult]:
    return [
        _timed("1", "genus-0 one-backbone polynomials m=0..8", check_genus0_polynomials),
        _timed("2", "non-orientable decagon k=0..5", check_decagon),
    ]


# --------------------------------------------------------------------------
# oracle equivalence


def backbone_spectra(max_weight: int, max_b: int) -> list[Spectrum]:
    out = []

    def rec(i, rest, count, acc):
        if i > rest:
            if acc:
                out.append(Spectrum(acc))
            return
        for m in range(0, min(max_b - count, rest // i) + 1):
            rec(i + 1, rest - m * i, count + m, {**acc, i: m} if m else acc)

    rec(1, max_weight, 0, {})
    return out


def _point_evolution_counts(state, b: Spectrum, k: int) -> Counter:
    out: Counter = Counter()
    fact = math.factorial(b.size())
    for (x, s, t), c in state.slices[k].terms.items():
        if t == b:
            out[(_genus(x, state.spec.orientable), s)] += int(c * fact)
    return out


def _length_evolution_counts(state, nb: int, k: int) -> Counter:
    out: Counter = Counter()
    key = Spectrum.e(1, nb)
    fact = math.factorial(nb)
    for (x, s, t), c in state.slices[k].terms.items():
        if t == key:
            out[(_genus(x, state.spec.orientable), s)] += int(c * fact)
    return out


def check_oracle_point(variant, single: int = 10, multi: int = 8, max_b: int = 3):
    state = evolve(ModelSpec(SpectrumKind.POINT, variant, max_k=single // 2, max_weight=single, max_b=max_b))
    cells = diagrams = 0
    bad = []
    for b in backbone_spectra(single, max_b):
        if b.size() > 1 and b.weight() > multi:
            continue
        for k in range(b.weight() // 2 + 1):
            want = point_counts(b, k, variant)
            got = _point_evolution_counts(state, b, k)
            cells += 1
            diagrams += sum(want.values())
            if got != want:
                bad.append({"b": repr(b), "k": k})
    return not bad, {"cells": cells, "diagrams": diagrams, "mismatches": bad[:10]}


def check_oracle_length(variant, single: int = 10, multi: int = 8, max_b: int = 3):
    state = evolve(ModelSpec(SpectrumKind.LENGTH, variant, max_k=single // 2, max_weight=max_b, max_b=max_b))
    cells = diagrams = 0
    bad = []
    for nb in range(1, max_b + 1):
        limit = single if nb == 1 else multi
        for k in range(limit // 2 + 1):
            want = length_counts(nb, k, variant)
            got = _length_evolution_counts(state, nb, k)
            cells += 1
            diagrams += sum(want.values())
            if got != want:
                bad.append({"b": nb, "k": k})
    return not bad, {"cells": cells, "diagrams": diagrams, "mismatches": bad[:10]}


def spectra_of_size(total: int, parts: int) -> list[Spectrum]:
    """Spectra (indices >= 0) with ``parts`` entries and weight ``total``."""
    out = []

    def rec(i, rest, left, acc):
        if left == 0:
            if rest == 0:
                out.append(Spectrum(acc))
            return
        if i > rest:
            return
        for m in range(left + 1):
            if m * i > rest:
                break
            rec(i + 1, rest - m * i, left - m, {**acc, i: m} if m else acc)

    rec(0, total, parts, {})
    return out


def check_recursion(max_vertices: int = 10):
    state = evolve(ModelSpec(SpectrumKind.POINT, ORIENTABLE, max_k=max_vertices // 2, max_weight=max_vertices, max_b=1))
    checked = nonzero = 0
    bad = []
    for m in range(1, max_vertices + 1):
        e_m = Spectrum.e(m)
        for k in range(m // 2 + 1):
            l = m - 2 * k
            ev = _point_evolution_counts(state, e_m, k)
            for g in range(k // 2 + 1):
                parts = k + 1 - 2 * g
                for n in spectra_of_size(l, parts):
                    rec = one_backbone_recursion(g, k, l, n)
                    checked += 1
                    nonzero += rec != 0
                    if rec != ev.get((g, n), 0):
                        bad.append({"g": g, "k": k, "l": l, "n": repr(n), "recursion": rec, "evolution": ev.get((g, n), 0)})
            # nothing in evolution outside the enumerated types
            for (g, n) in ev:
                if n.size() != k + 1 - 2 * g:
                    bad.append({"g": g, "k": k, "n": repr(n), "unexpected": True})
    return not bad, {"types": checked, "nonzero": nonzero, "mismatches": bad[:10]}


def suite_oracle(max_vertices: int = 10, multi_vertices: int = 8, max_backbones: int = 3, **_) -> list[CheckResult]:
    out = []
    for model, fn in (("point", check_oracle_point), ("length", check_oracle_length)):
        for variant in (ORIENTABLE, NON_ORIENTABLE):
            out.append(
                _timed(
                    "3",
                    f"oracle vs evolution, {model} model, {variant.value}",
                    lambda fn=fn, variant=variant: fn(variant, max_vertices, multi_vertices, max_backbones),
                )
            )
    out.append(_timed("4", "one-backbone recursion vs evolution", lambda: check_recursion(max_vertices)))
    return out


# --------------------------------------------------------------------------
# Harer-Zagier and shapes


def check_harer_zagier(n_max: int = 8):
    state = evolve(ModelSpec(SpectrumKind.LENGTH, ORIENTABLE, max_k=n_max, max_weight=1, max_b=1))
    C = harer_zagier_numbers(state)

    def c(g, n):
        return C.get((g, n), 0) if g >= 0 and n >= 0 else 0

    catalan = [c(0, n) for n in range(n_max + 1)]
    bad = []
    for n in range(1, n_max + 1):
        for g in range(0, n // 2 + 1):
            lhs = (n + 1) * c(g, n)
            rhs = (2 * n - 1) * (2 * c(g, n - 1) + math.comb(2 * n - 2, 2) * c(g - 1, n - 2))
            if lhs != rhs:
                bad.append({"g": g, "n": n, "lhs": lhs, "rhs": rhs})
    ok = not bad and catalan == golden.CATALAN[: n_max + 1]
    table = {f"{g},{n}": v for (g, n), v in sorted(C.items())}
    return ok, {"genus0": catalan, "table": table, "recursion_failures": bad}


def catalan_series(order: int) -> PowerSeries1:
    return PowerSeries1([math.comb(2 * n, n) // (n + 1) for n in range(order + 1)])


def shapes_rhs(shape: list[Fraction], b: int, order: int) -> PowerSeries1:
    """``(z C0(z))^{-b} S((C0(z) - 1) / (2 - C0(z)))`` truncated at ``order``."""
    big = order + b
    c0 = catalan_series(big)
    u = (c0 - 1) * (PowerSeries1([2], big) - c0).inverse()
    s = PowerSeries1(list(shape) + [0] * (big + 1), big)
    composed = s.compose(u)
    return (composed.shift_down(b) * (c0**b).inverse()).truncate(order)


def check_shapes(g: int, b: int, order: int = 6):
    state = evolve(ModelSpec(SpectrumKind.LENGTH, ORIENTABLE, max_k=order + b, max_weight=b, max_b=b))
    C = chord_diagram_series(state, order)
    S = shape_series(state, order + b)
    lhs = PowerSeries1(C.get((g, b), [0] * (order + 1)), order)
    rhs = shapes_rhs(S.get((g, b), [0] * (order + b + 1)), b, order)
    return lhs == rhs, {
        "C": [str(v) for v in lhs.rationals()],
        "from_shapes": [str(v) for v in rhs.rationals()],
        "S": [str(v) for v in S.get((g, b), [])],
    }


def suite_harer_zagier(**_) -> list[CheckResult]:
    return [_timed("5", "Harer-Zagier recursion and Catalan numbers", check_harer_zagier)]


def suite_shapes(**_) -> list[CheckResult]:
    return [
        _timed("6", f"shape relation (g,b)=({g},{b}) to z^6", lambda g=g, b=b: check_shapes(g, b))
        for g, b in ((0, 1), (1, 1), (0, 2))
    ]


# --------------------------------------------------------------------------
# KP and operator identities


def check_kp(model: str, equation: int, y_max: int = 4, t_max: int = 3, state=None):
    if state is None:
        state = kp_state(model, y_max, t_max)
    sizes = []
    probe = []
    for y in range(y_max + 1):
        r = kp_residual(state, equation, y, t_max)
        sizes.append(len(r))
        # size of the leading second-derivative term, to show the check is not vacuous
        probe.append(len(derivative(state.slices[y].fold_x(), (1, 1))))
    return all(n == 0 for n in sizes), {"residual_terms": sizes, "F11_terms": probe}


def kp_state(model: str, y_max: int = 4, t_max: int = 3):
    if model == "point":
        # t-weight 16 keeps every s-derivative in the equations populated at y^4
        return evolve(ModelSpec(SpectrumKind.POINT, ORIENTABLE, max_k=y_max, max_weight=16, max_b=t_max))
    return evolve(ModelSpec(SpectrumKind.LENGTH, ORIENTABLE, max_k=y_max, max_weight=t_max, max_b=t_max))


def suite_kp(**_) -> list[CheckResult]:
    out = []
    for model in ("point", "length"):
        state = kp_state(model)
        for eq in (1, 2, 3, 4):
            out.append(_timed("7", f"KP equation {eq} on the {model} model at x=1", lambda eq=eq, st=state, m=model: check_kp(m, eq, state=st)))
    out.append(_timed("8", "L0+L2 = s0^2 d/ds2 + s0 Lambda_-2 + M_-2 (weight <= 10)", lambda: (operator_identity_check("point", 10), {})))
    out.append(_timed("8", "K0+K2 = M_2 (weight <= 10)", lambda: (operator_identity_check("length", 10), {})))
    return out


# --------------------------------------------------------------------------
# matrix model


def check_matrix_grid(samples: int = 200_000, seed: int = 7, m_max: int = 6, bound: float = 4.0):
    states = {
        Ensemble.HERMITIAN: evolve(ModelSpec(SpectrumKind.POINT, ORIENTABLE, max_k=m_max // 2, max_weight=m_max)),
        Ensemble.REAL_SYMMETRIC: evolve(ModelSpec(SpectrumKind.POINT, NON_ORIENTABLE, max_k=m_max // 2, max_weight=m_max)),
    }
    cells = []
    worst = 0.0
    for cell_index, (ens, N, p_sel, s) in enumerate(
        (e, N, p, s) for e in Ensemble for N in (3, 6) for p in ("0", "half", "N") for s in (0, 1)
    ):
        p = {"0": 0, "half": N // 2, "N": N}[p_sel]
        config = EnsembleConfig(ens, N, p, s, samples, seed + cell_index)
        est = sample_moments(config, m_max)
        for m in range(m_max + 1):
            exact = float(exact_moment(states[ens], m, s, p, N).constant())
            z = est[m].zscore(exact)
            worst = max(worst, abs(z))
            cells.append(
                {
                    "ensemble": ens.value, "N": N, "p": p, "s": s, "m": m, "seed": config.seed,
                    "mean": est[m].mean, "stderr": est[m].stderr, "exact": exact, "zscore": z,
                }
            )
    failures = [c for c in cells if not abs(c["zscore"]) <= bound]
    return not failures, {"cells": len(cells), "max_abs_z": worst, "failures": failures, "samples": samples}


def suite_matrix(samples: int = 200_000, seed: int = 7, **_) -> list[CheckResult]:
    return [_timed("10", f"Monte Carlo moments within 4 stderr ({samples} samples)", lambda: check_matrix_grid(samples, seed))]


# --------------------------------------------------------------------------
# free probability and the vertex / length relation


def check_free_add(order: int = 8):
    moments = free_add(semicircle_moments(order), projector_moments(order), order)
    want = golden.genus0_one_backbone()
    state = evolve(ModelSpec(SpectrumKind.POINT, ORIENTABLE, max_k=order // 2, max_weight=order, max_b=1))
    evolved = genus0_one_backbone_polynomials(state, order)
    bad = [m for m in range(order + 1) if not (moments[m] == want[m] == evolved[m])]
    return not bad, {"orders": order + 1, "mismatches": bad}


def check_catalan_gf(order: int = 5):
    got = genus0_length_gf([1] * (order + 1), order).rationals()
    return got == golden.CATALAN[: order + 1], {"coefficients": [str(v) for v in got]}


def _length_genus0(state, weights, order) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    one = Spectrum.e(1)
    for k in range(order + 1):
        for (x, s, t), c in state.slices[k].terms.items():
            if x != -2 or t != one:
                continue
            v = c
            for i, m in s:
                v *= Fraction(weights[i - 1] if i <= len(weights) else 0) ** m
            out[k] += v
    return out


def _vertex_genus0(state, weights, order) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        for (x, s, _), c in state.slices[k - 1].terms.items():
            if x != -2:
                continue
            v = c
            for i, m in s:
                v *= Fraction(weights[i - 1] if i <= len(weights) else 0) ** m
            out[k] += v
    return out


WEIGHT_SETS = {
    "primes": [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37],
    "s1 only": [1] + [0] * 11,
}


def check_genus0_vs_length(order: int = 5):
    """The literal comparison: ``genus0_length_gf`` against length-model counts."""
    state = evolve(ModelSpec(SpectrumKind.LENGTH, ORIENTABLE, max_k=order, max_weight=1, max_b=1))
    detail = {}
    ok = True
    for label, w in WEIGHT_SETS.items():
        gf = genus0_length_gf(w, order).rationals()
        counts = _length_genus0(state, w, order)
        detail[label] = {"gf": [str(v) for v in gf], "length_model": [str(v) for v in counts]}
        ok &= gf == counts
    return ok, detail


def check_genus0_vs_vertex(order: int = 5):
    """``[z^k](gf - 1)`` equals the genus-0 vertex-model slice ``k - 1``,
    numerically for each weight set and as polynomials in ``s_1..s_{2k}``."""
    state = evolve(ModelSpec(SpectrumKind.VERTEX, ORIENTABLE, max_k=order, max_weight=1, max_b=1))
    detail = {}
    ok = True
    for label, w in WEIGHT_SETS.items():
        gf = genus0_length_gf(w, order).rationals()
        vertex = _vertex_genus0(state, w, order)
        vertex[0] = Fraction(1)
        detail[label] = {"gf": [str(v) for v in gf], "vertex_model": [str(v) for v in vertex]}
        ok &= gf == vertex
    symbols = [Poly.symbol(f"s{i}") for i in range(1, 2 * order + 1)]
    sym = genus0_length_gf(symbols, order)
    bad = []
    for k in range(1, order + 1):
        vk = series_to_poly(state.slices[k - 1].filter(lambda key: key[0] == -2))
        if sym[k] != vk:
            bad.append(k)
    detail["symbolic_mismatches"] = bad
    return ok and not bad, detail


def check_lambda1_relation(k_max: int = 6):
    vertex = evolve(ModelSpec(SpectrumKind.VERTEX, ORIENTABLE, max_k=k_max - 1, max_weight=1, max_b=1))
    length = evolve(ModelSpec(SpectrumKind.LENGTH, ORIENTABLE, max_k=k_max, max_weight=1, max_b=1))
    ok = lambda1_check(vertex, length)
    terms = [len(lambda1(vertex.slices[k - 1])) for k in range(1, k_max + 1)]
    return ok, {"k_max": k_max, "lambda1_terms": terms}


def suite_freeprob(**_) -> list[CheckResult]:
    return [
        _timed("9", "1/2 Lambda_1 Fhat^(k-1) = k G_1^(k) for k <= 6", check_lambda1_relation),
        _timed("11a", "semicircle boxplus projector = genus-0 polynomials m <= 8", check_free_add),
        _timed("11b", "genus-0 length series at s_i = 1 is Catalan", check_catalan_gf),
        _timed("11c", "genus-0 length series vs length-model counts, k <= 5", check_genus0_vs_length),
        _timed("11c*", "genus-0 length series vs genus-0 vertex-model series, k <= 5", check_genus0_vs_vertex),
    ]


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "golden": suite_golden,
    "oracle": suite_oracle,
    "kp": suite_kp,
    "matrix": suite_matrix,
    "freeprob": suite_freeprob,
    "shapes": suite_shapes,
    "harer-zagier": suite_harer_zagier,
}


def run_suite(name: str, **options) -> list[CheckResult]:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(**options)
