"""Time the compiled and numpy kernel backends on identical inputs.

    python3 benchmarks/bench_kernels.py [--max-n 10] [--k 16] [--repeat 3]

Prints one line per (kernel, n) with the best-of-``repeat`` wall time of each
backend and the speedup. Results are also checked for exact agreement.
"""

import argparse
import time

import numpy as np

from pricedquery import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=10)
    parser.add_argument("--k", type=int, default=16, help="error allowance for the DP")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if kernels.compiled_backend is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    py, cc = kernels.python_backend, kernels.compiled_backend
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<18}{'n':>3}{'K':>5}{'numpy s':>12}{'compiled s':>12}{'speedup':>9}")
    for n in range(4, args.max_n + 1):
        table = (rng.random(1 << n) < 0.5).astype(np.uint8)
        costs = rng.integers(1, 9, size=n).astype(np.int64)
        ones = np.asarray(cc.subcube_ones(table, n))
        K = min(args.k, 1 << (n - 1))
        cases = [
            ("flip_counts", 0, lambda m: m.flip_counts(table, n)),
            ("subcube_ones", 0, lambda m: m.subcube_ones(table, n)),
            ("opt_table/exp", K, lambda m: m.opt_table(ones, n, costs, K, False)),
            ("opt_table/worst", K, lambda m: m.opt_table(ones, n, costs, K, True)),
        ]
        for name, k, call in cases:
            t_py, a = best_of(lambda: call(py), args.repeat)
            t_cc, b = best_of(lambda: call(cc), args.repeat)
            if not np.array_equal(np.asarray(a), np.asarray(b)):
                raise SystemExit(f"backends disagree on {name} at n={n}")
            print(f"{name:<18}{n:>3}{k:>5}{t_py:>12.5f}{t_cc:>12.5f}{t_py / t_cc:>9.1f}")


if __name__ == "__main__":
    main()
