"""Compare the numpy and numba kernels on the two hot paths.

    python3 benchmarks/bench_kernels.py [--n 9] [--repeat 3]
"""
import argparse
import time

import numpy as np

from schurdist import _kernels
from schurdist.covariants import ghz_family_state
from schurdist.rates import copy_probabilities


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=9, help="copies for the projection benchmark")
    ap.add_argument("--scan-n", type=int, default=200, help="n for the Kronecker scan benchmark")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = [_kernels.NUMPY_KERNELS]
    if _kernels.HAS_NUMBA:
        backends.append(_kernels.NUMBA_KERNELS)
    else:
        print("numba not importable; numpy only")

    psi = ghz_family_state(0.61, 0.93, 1.12, 0.84, 0.41)
    ref = None
    for k in backends:
        # warm-up compiles the numba kernels
        copy_probabilities(psi, 3, kernels=k)
        k.kron_scan(4)
        t, tab = best_of(lambda: copy_probabilities(psi, args.n, kernels=k), args.repeat)
        ts, g = best_of(lambda: k.kron_scan(args.scan_n), args.repeat)
        vals = np.array([tab.entries[t_] for t_ in sorted(tab.entries)])
        if ref is None:
            ref = (vals, g)
        else:
            assert np.allclose(vals, ref[0], atol=1e-13) and np.array_equal(g, ref[1])
        print(f"{k.name:6s}  copy_probabilities(n={args.n}): {t:8.3f} s   kron_scan(n={args.scan_n}): {ts:8.4f} s")


if __name__ == "__main__":
    main()
