"""Gaussian matrix moments: exact values from diagram counts and Monte Carlo.

Conventions
-----------
Hermitian ensemble: ``E x_ab x_cd = d_ad d_bc`` (diagonal variance 1,
``E|x_ab|^2 = 1`` off the diagonal).  Real symmetric ensemble:
``E x_ab x_cd = d_ac d_bd + d_ad d_bc`` (diagonal variance 2, off-diagonal 1),
so every twisted and untwisted gluing carries weight 1.  ``P`` is the
diagonal projector onto the first ``p`` coordinates.

Everything here is float64 except :func:`exact_moment`, which is exact.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .evolution import EvolutionState, SpectrumKind, TruncationExceeded
from .oracle import _batch
from .poly import Poly
from .powerseries import PowerSeries1
from .spectra import Orientability, Spectrum

CHUNK = 20_000


class Ensemble(str, Enum):
    HERMITIAN = "hermitian"
    REAL_SYMMETRIC = "real-symmetric"

    @property
    def variant(self) -> Orientability:
        return Orientability.ORIENTABLE if self is Ensemble.HERMITIAN else Orientability.NON_ORIENTABLE


@dataclass(frozen=True)
class EnsembleConfig:
    ensemble: Ensemble
    N: int
    p: int
    s: float
    samples: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "ensemble", Ensemble(self.ensemble))
        if self.N < 1:
            raise ValueError("N must be positive")
        if not (0 <= self.p <= self.N):
            raise ValueError("need 0 <= p <= N")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")

    def to_json(self) -> dict:
        d = asdict(self)
        d["ensemble"] = self.ensemble.value
        return d


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int

    def zscore(self, exact: float) -> float:
        diff = self.mean - exact
        if self.stderr == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.stderr

    def to_json(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples}


def _estimate(values: np.ndarray) -> MCEstimate:
    n = len(values)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(mean, stderr, n)


# --------------------------------------------------------------------------
# exact moments


def _symbol(v, name: str) -> Poly:
    if v is None:
        return Poly.symbol(name)
    return Poly.coerce(Fraction(v)) if not isinstance(v, Poly) else v


def exact_moment(state: EvolutionState, m: int, s=None, p=None, N=None) -> Poly:
    """``E Tr(X + sP)^m`` as a polynomial (or number) in ``s``, ``p``, ``N``.

    The ensemble follows the state's variant.  Unset arguments stay symbolic.
    """
    if state.spec.kind is not SpectrumKind.POINT:
        raise ValueError("exact moments need a point-spectrum state")
    s, p, N = _symbol(s, "s"), _symbol(p, "p"), _symbol(N, "N")
    if m == 0:
        return N
    if m > state.spec.max_weight or m // 2 > state.k:
        raise TruncationExceeded(f"moment {m} needs max_weight >= {m} and k >= {m // 2}")
    backbone = Spectrum.e(m)
    total = Poly.const(0)
    for k in range(m // 2 + 1):
        for (_, n, t), c in state.slices[k].terms.items():
            if t != backbone:
                continue
            n0 = n.get(0)
            total = total + s ** (m - 2 * k) * N**n0 * p ** (n.size() - n0) * c
    return total


def exact_product_moment(bspec: Spectrum, ensemble, s=None, p=None, N=None) -> Poly:
    """``E prod_i Tr(X + sP)^{m_i}`` by direct Wick enumeration.

    Disconnected gluings are included; used for multi-backbone checks.
    """
    ensemble = Ensemble(ensemble)
    s, p, N = _symbol(s, "s"), _symbol(p, "p"), _symbol(N, "N")
    sizes = tuple(i for i, mult in bspec for _ in range(mult))
    total_size = sum(sizes)
    out = Poly.const(0)
    for k in range(total_size // 2 + 1):
        if total_size == 0:
            break
        partner, twist = _batch(sizes, k, ensemble.variant)
        nvec, _, _, _ = _kernels.boundary_spectra(partner, twist, sizes)
        rows, counts = np.unique(nvec, axis=0, return_counts=True)
        for row, c in zip(rows, counts):
            n0 = int(row[0])
            rest = int(row.sum()) - n0
            out = out + s ** (total_size - 2 * k) * N**n0 * p**rest * int(c)
    return out


def resolvent_series(state: EvolutionState, N, p, s, order: int) -> PowerSeries1:
    """``sum_m M_m w^m`` with ``w = 1/z``: equals ``-z E Tr(X + sP - z)^{-1}``."""
    return PowerSeries1([exact_moment(state, m, s, p, N) for m in range(order + 1)])


def resolvent_expectation_series(state: EvolutionState, N, p, s, order: int) -> PowerSeries1:
    """``E Tr(X + sP - z)^{-1} = -sum_m M_m w^{m+1}`` in ``w = 1/z``."""
    r = resolvent_series(state, N, p, s, order)
    return -PowerSeries1([0] + list(r.coeffs))


# --------------------------------------------------------------------------
# sampling


def _chunks(samples: int, seed: int):
    seeds = np.random.SeedSequence(seed).spawn(math.ceil(samples / CHUNK))
    left = samples
    for ss in seeds:
        n = min(CHUNK, left)
        left -= n
        yield n, np.random.Generator(np.random.Philox(ss))


def sample_matrices(ensemble: Ensemble, N: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if ensemble is Ensemble.HERMITIAN:
        a = rng.standard_normal((n, N, N)) + 1j * rng.standard_normal((n, N, N))
        return (a + np.conj(np.swapaxes(a, 1, 2))) / 2
    a = rng.standard_normal((n, N, N))
    return (a + np.swapaxes(a, 1, 2)) / math.sqrt(2)


def _shifted(config: EnsembleConfig, n: int, rng) -> np.ndarray:
    Y = sample_matrices(config.ensemble, config.N, n, rng)
    if config.s and config.p:
        idx = np.arange(config.p)
        Y[:, idx, idx] += config.s
    return Y


def sample_trace_power_table(config: EnsembleConfig, mmax: int, backend: str | None = None) -> np.ndarray:
    """Per-sample ``Tr(X + sP)^m`` for ``m = 0..mmax``; shape ``(samples, mmax+1)``."""
    parts = [
        _kernels.trace_powers(_shifted(config, n, rng), mmax, backend)
        for n, rng in _chunks(config.samples, config.seed)
    ]
    return np.concatenate(parts, axis=0)


def sample_moments(config: EnsembleConfig, mmax: int, backend: str | None = None) -> list[MCEstimate]:
    table = sample_trace_power_table(config, mmax, backend)
    return [_estimate(table[:, m]) for m in range(mmax + 1)]


def sample_trace_powers(config: EnsembleConfig, m: int | Spectrum, backend: str | None = None) -> MCEstimate:
    """Estimate ``E Tr(X + sP)^m``, or ``E prod Tr(X + sP)^{m_i}`` for a spectrum."""
    if isinstance(m, Spectrum):
        mmax = max(m.max_index(), 0)
        table = sample_trace_power_table(config, mmax, backend)
        vals = np.ones(len(table))
        for i, mult in m:
            vals = vals * table[:, i] ** mult
        return _estimate(vals)
    return _estimate(sample_trace_power_table(config, m, backend)[:, m])


def sample_wishart_like(
    k: int, a_spectrum: Sequence[float], N: int | None = None, samples: int = 1000, seed: int = 0
) -> MCEstimate:
    """Estimate ``(1/N) E Tr(A X A* A X* A*)^k`` for diagonal ``A``.

    ``X`` is complex Gaussian with independent real and imaginary parts and
    total entry variance ``1/N``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    a = np.asarray(a_spectrum, dtype=float)
    N = N or len(a)
    if len(a) != N:
        raise ValueError("A spectrum must have N entries")
    a2 = a**2
    vals = []
    # modest batches keep memory bounded for large N
    batch = max(1, min(CHUNK, 2_000_000 // (N * N)))
    seeds = np.random.SeedSequence(seed).spawn(math.ceil(samples / batch))
    left = samples
    for ss in seeds:
        n = min(batch, left)
        left -= n
        rng = np.random.Generator(np.random.Philox(ss))
        X = (rng.standard_normal((n, N, N)) + 1j * rng.standard_normal((n, N, N))) / math.sqrt(2 * N)
        # A X A* A X* A* is similar to (A^2 X)(A^2 X*)
        M = (a2[None, :, None] * X) @ (a2[None, :, None] * np.conj(np.swapaxes(X, 1, 2)))
        vals.append(np.trace(np.linalg.matrix_power(M, k), axis1=1, axis2=2).real / N)
    return _estimate(np.concatenate(vals))
