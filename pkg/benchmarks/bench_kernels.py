"""Timing of the compiled and numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--k 10000] [--repeat 200]

Reports the median time per call of each kernel on each available
backend, plus numpy's own ``Generator.standard_t`` as a reference, and
the end-to-end cost of one delta_M (two groups of ``k`` draws plus the
order-statistic selection).
"""

import argparse
import statistics
import timeit

import numpy as np

from nullstrength import kernels


def _median_time(fn, repeat):
    fn()  # warm up
    times = timeit.repeat(fn, number=1, repeat=repeat)
    return statistics.median(times)


def run(k, repeat, df=9.0):
    rows = []
    mu_x = 10.0 + np.random.default_rng(1).standard_t(df, k)
    mu_y = 10.5 + np.random.default_rng(2).standard_t(df, k)
    rank = int(0.95 * k)
    for name, mod in kernels.backends().items():
        rng = np.random.default_rng(0)
        rows.append((name, "standard_t", _median_time(lambda: mod.standard_t(rng, df, k), repeat)))
        rows.append((name, "diff_abs_kth", _median_time(lambda: mod.diff_abs_kth(mu_x, mu_y, rank, False), repeat)))
        rows.append(
            (name, "diff_abs_kth rel", _median_time(lambda: mod.diff_abs_kth(mu_x, mu_y, rank, True), repeat))
        )

        def one_delta_m(mod=mod):
            g1, g2 = np.random.default_rng(3), np.random.default_rng(4)
            x = 10.0 + 0.3 * mod.standard_t(g1, df, k)
            y = 10.5 + 0.3 * mod.standard_t(g2, df, k)
            return mod.diff_abs_kth(x, y, rank, False)

        rows.append((name, "delta_m end-to-end", _median_time(one_delta_m, repeat)))
    rng = np.random.default_rng(0)
    rows.append(("numpy", "Generator.standard_t", _median_time(lambda: rng.standard_t(df, k), repeat)))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, default=10_000, help="draws per call")
    parser.add_argument("--repeat", type=int, default=200, help="timed calls per kernel")
    args = parser.parse_args(argv)
    rows = run(args.k, args.repeat)
    print(f"active backend: {kernels.BACKEND}; k = {args.k}; median of {args.repeat} calls")
    print(f"{'backend':<8} {'kernel':<22} {'time (us)':>10}")
    base = {kern: t for b, kern, t in rows if b == "python"}
    for backend, kern, t in rows:
        speedup = f"  x{base[kern] / t:4.2f} vs python" if backend == "cython" and kern in base else ""
        print(f"{backend:<8} {kern:<22} {t * 1e6:>10.1f}{speedup}")


if __name__ == "__main__":
    main()
