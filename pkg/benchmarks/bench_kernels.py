#!/usr/bin/env python3
"""Time the compiled recursion kernel against the numpy fallback.

The recursion dominates simulation and the residual bootstrap, so this is
the one loop where the extension pays for itself. Run from a checkout:

    python3 benchmarks/bench_kernels.py
"""

import timeit

import numpy as np

from lexivar._kernels import BACKEND, _fallback

try:
    from lexivar._kernels import _native
except ImportError:
    _native = None

# (p, k, t_len, calls) — the short wide-call case mirrors one bootstrap
# replicate of a monthly bivariate fit; the long cases stress throughput.
CASES = [
    (1, 2, 58, 20_000),
    (2, 2, 58, 20_000),
    (1, 2, 500, 2_000),
    (4, 3, 1_000, 500),
    (1, 6, 5_000, 100),
]


def make_case(p, k, t_len, seed=0):
    rng = np.random.default_rng(seed)
    coefs = rng.normal(scale=0.3 / np.sqrt(p * k), size=(p, k, k))
    preset = rng.normal(size=(t_len, k))
    initial = rng.normal(size=(p, k))
    return coefs, preset, initial


def best_per_call(func, args, calls):
    timer = timeit.Timer(lambda: func(*args))
    return min(timer.repeat(repeat=5, number=calls)) / calls


def main():
    print(f"installed backend: {BACKEND}")
    if _native is None:
        print("compiled kernel unavailable; timing the fallback alone\n")
    header = f"{'p':>2} {'k':>2} {'t_len':>6} {'python':>12} {'native':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for p, k, t_len, calls in CASES:
        args = make_case(p, k, t_len)
        py = best_per_call(_fallback.var_recursion, args, calls)
        if _native is not None:
            cc = best_per_call(_native.var_recursion, args, calls)
            ratio = f"{py / cc:7.1f}x"
            native_col = f"{cc * 1e6:10.2f}us"
        else:
            ratio, native_col = "      --", "        --"
        print(f"{p:>2} {k:>2} {t_len:>6} {py * 1e6:10.2f}us {native_col} {ratio}")


if __name__ == "__main__":
    main()
