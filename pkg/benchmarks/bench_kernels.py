#!/usr/bin/env python3
"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_kernels.py [--k 8,10,12] [--trials 2000] [--repeat 3]

Prints the best-of-``repeat`` wall time per backend and the speedup.
Decoder inputs mimic the simulator: erasure LLRs (0 or +-inf) and
BSC LLRs (+-log((1-p)/p)).
"""

import argparse
import time

import numpy as np

from polaract import _kernels
from polaract.evolution import evolve, select_indices


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def llr_inputs(kind, trials, n, rng):
    if kind == "bec":
        signs = np.where(rng.random((trials, n)) < 0.05, -np.inf, np.inf)
        return np.where(rng.random((trials, n)) < 0.3, 0.0, signs)
    mag = np.log(0.95 / 0.05)
    return np.where(rng.random((trials, n)) < 0.05, -mag, mag)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", default="8,10,12")
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled core not built; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'k':>4}{'trials':>8}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for k in (int(v) for v in args.k.split(",")):
        n = 1 << k
        bits = rng.integers(0, 2, (args.trials, n), dtype=np.uint8)
        times = {}
        for name in backends:
            impl = _kernels.get_backend(name)
            times[name] = best_of(lambda: impl.polar_transform(bits.copy()), args.repeat)
        _row("polar_transform", k, args.trials, times)

        for kind in ("bec", "bsc"):
            frozen = ~select_indices(evolve(0.3, k), "rate", rate=0.45).mask
            fvals = np.zeros(n, dtype=np.uint8)
            llr = llr_inputs(kind, args.trials, n, rng)
            times = {}
            for name in backends:
                impl = _kernels.get_backend(name)
                times[name] = best_of(lambda: impl.sc_decode_batch(llr, frozen, fvals), args.repeat)
            _row(f"sc_decode/{kind}", k, args.trials, times)


def _row(label, k, trials, times):
    cells = "".join(f"{t * 1e3:>10.1f}ms" for t in times.values())
    speed = times["python"] / times["cython"] if "cython" in times else float("nan")
    print(f"{label:<14}{k:>4}{trials:>8}{cells}{speed:>9.2f}x")


if __name__ == "__main__":
    main()
