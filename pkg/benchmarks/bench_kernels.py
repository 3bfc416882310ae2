"""Time the numba and pure-numpy kernels on the workloads the checks use.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call per signature compiles (or loads the on-disk cache);
it is reported separately and excluded from the timings.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from chordgf import _kernels
from chordgf.matrix_model import Ensemble, sample_matrices
from chordgf.oracle import _batch
from chordgf.spectra import Orientability


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def walk_cases():
    for sizes, k, variant in (
        ((10,), 5, Orientability.NON_ORIENTABLE),
        ((10,), 4, Orientability.ORIENTABLE),
        ((3, 3, 2), 4, Orientability.NON_ORIENTABLE),
    ):
        partner, twist = _batch(sizes, k, variant)
        yield f"walk {sizes} k={k} {variant.value} ({len(partner)} diagrams)", partner, twist, sizes


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels._HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rows = []
    for label, partner, twist, sizes in walk_cases():
        t0 = time.perf_counter()
        jit = _kernels.boundary_spectra(partner, twist, sizes, "numba")
        first = time.perf_counter() - t0
        ref = _kernels.boundary_spectra(partner, twist, sizes, "numpy")
        assert all(np.array_equal(a, b) for a, b in zip(jit, ref)), label
        t_numba = best_of(lambda: _kernels.boundary_spectra(partner, twist, sizes, "numba"), args.repeat)
        t_numpy = best_of(lambda: _kernels.boundary_spectra(partner, twist, sizes, "numpy"), args.repeat)
        rows.append((label, first, t_numba, t_numpy))

    rng = np.random.Generator(np.random.Philox(0))
    for ens, N in ((Ensemble.HERMITIAN, 3), (Ensemble.REAL_SYMMETRIC, 6)):
        Y = sample_matrices(ens, N, 20_000, rng)
        t0 = time.perf_counter()
        jit = _kernels.trace_powers(Y, 6, "numba")
        first = time.perf_counter() - t0
        assert np.allclose(jit, _kernels.trace_powers(Y, 6, "numpy"), rtol=1e-10, atol=1e-8)
        t_numba = best_of(lambda: _kernels.trace_powers(Y, 6, "numba"), args.repeat)
        t_numpy = best_of(lambda: _kernels.trace_powers(Y, 6, "numpy"), args.repeat)
        rows.append((f"trace powers m<=6, {ens.value} N={N}, 20000 matrices", first, t_numba, t_numpy))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'first call':>10}  {'numba':>9}  {'numpy':>9}  {'speedup':>7}")
    for label, first, a, b in rows:
        print(f"{label:<{width}}  {first:>9.3f}s  {a:>8.4f}s  {b:>8.4f}s  {b / a:>6.1f}x")


if __name__ == "__main__":
    main()
