from fractions import Fraction

import numpy as np
import pytest

from chordgf import _kernels
from chordgf.evolution import ModelSpec, SpectrumKind, TruncationExceeded, evolve
from chordgf.freeprob import genus0_length_gf
from chordgf.matrix_model import (
    Ensemble,
    EnsembleConfig,
    MCEstimate,
    exact_moment,
    exact_product_moment,
    resolvent_series,
    sample_matrices,
    sample_moments,
    sample_trace_powers,
    sample_wishart_like,
)
from chordgf.poly import Poly
from chordgf.spectra import Orientability, Spectrum

N_, p_, s_ = Poly.symbol("N"), Poly.symbol("p"), Poly.symbol("s")
H, RS = Ensemble.HERMITIAN, Ensemble.REAL_SYMMETRIC


@pytest.fixture(scope="module")
def states():
    return {
        H: evolve(ModelSpec(SpectrumKind.POINT, Orientability.ORIENTABLE, max_k=4, max_weight=8)),
        RS: evolve(ModelSpec(SpectrumKind.POINT, Orientability.NON_ORIENTABLE, max_k=3, max_weight=6)),
    }


def test_config_guards():
    with pytest.raises(ValueError):
        EnsembleConfig(H, 3, 4, 0, 10, 0)
    with pytest.raises(ValueError):
        EnsembleConfig(H, 3, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        EnsembleConfig("gaussian", 3, 0, 0, 10, 0)
    assert EnsembleConfig("real-symmetric", 3, 1, 0.5, 10, 2).to_json()["ensemble"] == "real-symmetric"


def test_zscore():
    est = MCEstimate(10.0, 0.5, 100)
    assert est.zscore(9.0) == 2.0
    assert MCEstimate(1.0, 0.0, 1).zscore(1.0) == 0.0


def test_exact_moment_examples(states):
    h = states[H]
    assert exact_moment(h, 0) == N_
    assert exact_moment(h, 2) == N_**2 + p_ * s_**2
    assert exact_moment(h, 4, s=0) == 2 * N_**3 + N_
    assert exact_moment(states[RS], 2, 0, 0, 3) == 12
    with pytest.raises(TruncationExceeded):
        exact_moment(states[RS], 8)


@pytest.mark.parametrize("ens", [H, RS])
@pytest.mark.parametrize("m", range(1, 7))
def test_exact_moment_matches_direct_wick(states, ens, m):
    assert exact_moment(states[ens], m) == exact_product_moment(Spectrum.e(m), ens)


def test_exact_moment_parity_and_p_free_at_s0(states):
    h = states[H]
    for m in range(1, 9):
        poly = exact_moment(h, m)
        assert all((m - dict(mono).get("s", 0)) % 2 == 0 for mono in poly.terms)
        assert "p" not in exact_moment(h, m, s=0).symbols()


def test_product_moment_example():
    assert exact_product_moment(Spectrum.e(1) + Spectrum.e(2), H, 1, 2, 4) == 40


def test_resolvent_series_low_orders(states):
    r = resolvent_series(states[H], None, None, None, 2)
    assert r[0] == N_ and r[2] == N_**2 + p_ * s_**2


def test_sampler_covariances():
    rng = np.random.Generator(np.random.Philox(1))
    X = sample_matrices(H, 3, 40000, rng)
    assert np.allclose(X, np.conj(np.swapaxes(X, 1, 2)))
    assert abs(np.mean(np.abs(X[:, 0, 1]) ** 2) - 1) < 0.03
    assert abs(np.mean(X[:, 0, 0].real ** 2) - 1) < 0.03
    Y = sample_matrices(RS, 3, 40000, rng)
    assert abs(np.mean(Y[:, 0, 1] ** 2) - 1) < 0.03
    assert abs(np.mean(Y[:, 0, 0] ** 2) - 2) < 0.06


@pytest.mark.parametrize(
    "ens, N, p, s, m, exact",
    [(H, 3, 0, 0, 2, 9.0), (RS, 3, 0, 0, 2, 12.0), (H, 4, 2, 1, 4, 174.0)],
)
def test_monte_carlo_examples(ens, N, p, s, m, exact):
    est = sample_trace_powers(EnsembleConfig(ens, N, p, s, 40000, 11), m)
    assert abs(est.zscore(exact)) <= 4


def test_monte_carlo_product():
    est = sample_trace_powers(EnsembleConfig(H, 4, 2, 1, 40000, 5), Spectrum.e(1) + Spectrum.e(2))
    assert abs(est.zscore(40.0)) <= 4


def test_sampling_is_reproducible():
    cfg = EnsembleConfig(RS, 3, 1, 1, 25000, 99)
    a = sample_moments(cfg, 4)
    b = sample_moments(cfg, 4)
    assert a == b


@pytest.mark.skipif(not _kernels._HAVE_NUMBA, reason="numba not installed")
def test_trace_power_backends_agree():
    rng = np.random.Generator(np.random.Philox(3))
    Y = sample_matrices(H, 5, 200, rng)
    a = _kernels.trace_powers(Y, 6, "numpy")
    b = _kernels.trace_powers(Y, 6, "numba")
    assert np.allclose(a, b, rtol=1e-10, atol=1e-8)


@pytest.mark.parametrize("k, want", [(1, 1.0), (2, 2.0)])
def test_wishart_like_identity_weight(k, want):
    est = sample_wishart_like(k, [1.0] * 60, samples=400, seed=2)
    # finite-N bias for k=2 is 1/N^2
    assert abs(est.mean - want) <= 4 * est.stderr + 1.0 / 60**2 + 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
def test_wishart_like_matches_genus0_series(k):
    # weights s_i = (1/N) Tr (A A*)^i for a two-level A
    N = 120
    a2 = np.array([1.0] * (N // 2) + [2.0] * (N // 2))
    weights = [Fraction(1 + 2**i, 2) for i in range(1, 2 * k + 2)]
    want = float(genus0_length_gf(weights, k)[k].constant())
    est = sample_wishart_like(k, np.sqrt(a2), samples=300, seed=1)
    # 1/N^2 corrections stay well below the tolerance at N = 120
    assert abs(est.mean - want) <= 4 * est.stderr + want / N**2 * 10


def test_product_of_free_wisharts_matches_free_mul():
    # (1/N) E Tr (W1 W2)^2 -> 3 for independent MP(1) factors
    rng = np.random.Generator(np.random.Philox(8))
    N, n = 60, 300
    X1 = (rng.standard_normal((n, N, N)) + 1j * rng.standard_normal((n, N, N))) / np.sqrt(2 * N)
    X2 = (rng.standard_normal((n, N, N)) + 1j * rng.standard_normal((n, N, N))) / np.sqrt(2 * N)
    W1 = X1 @ np.conj(np.swapaxes(X1, 1, 2))
    W2 = X2 @ np.conj(np.swapaxes(X2, 1, 2))
    P = W1 @ W2
    vals = np.trace(P @ P, axis1=1, axis2=2).real / N
    assert abs(vals.mean() - 3) < 4 * vals.std(ddof=1) / np.sqrt(n) + 0.05
