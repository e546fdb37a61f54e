"""Compare the numba kernels with their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeats 5]

Both paths run in one process through the ``use_numba`` argument, which is
what ``QUFTI_DISABLE_NUMBA=1`` selects globally. Results are checked for
agreement before timings are reported.
"""

import argparse
import time

import numpy as np

from qufti.fock import _layout
from qufti.linalg import Interferometer
from qufti.permanent import batch_amplitudes, permanent_ryser


def best_of(fn, repeats):
    fn()  # warm-up (includes JIT compilation for the numba path)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_ryser(sizes, repeats, rng):
    print(f"{'kernel':<10}{'size':>8}{'numba [s]':>14}{'numpy [s]':>14}{'speedup':>10}")
    for n in sizes:
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a, b = permanent_ryser(M, use_numba=True), permanent_ryser(M, use_numba=False)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a)), (n, a, b)
        t_nb = best_of(lambda: permanent_ryser(M, use_numba=True), repeats)
        t_np = best_of(lambda: permanent_ryser(M, use_numba=False), repeats)
        print(f"{'ryser':<10}{n:>8}{t_nb:>14.3e}{t_np:>14.3e}{t_np / t_nb:>10.1f}")


def bench_batch(modes, repeats, rng):
    for m in modes:
        d = m - 1
        interf = Interferometer(m, d)
        phases = rng.uniform(0, 2 * np.pi, d)
        U, dU = interf.unitary(phases), interf.derivatives(phases)
        _, in_idx, rows, norms = _layout((1,) * m)
        a_nb, g_nb = batch_amplitudes(U, dU, in_idx, rows, norms, use_numba=True)
        a_np, g_np = batch_amplitudes(U, dU, in_idx, rows, norms, use_numba=False)
        assert np.allclose(a_nb, a_np, atol=1e-12) and np.allclose(g_nb, g_np, atol=1e-12)
        t_nb = best_of(lambda: batch_amplitudes(U, dU, in_idx, rows, norms, True), repeats)
        t_np = best_of(lambda: batch_amplitudes(U, dU, in_idx, rows, norms, False), repeats)
        label = f"m={m}"
        print(f"{'batch':<10}{label:>8}{t_nb:>14.3e}{t_np:>14.3e}{t_np / t_nb:>10.1f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    bench_ryser([6, 10, 14, 18], args.repeats, rng)
    bench_batch([3, 4, 5, 6], args.repeats, rng)


if __name__ == "__main__":
    main()
