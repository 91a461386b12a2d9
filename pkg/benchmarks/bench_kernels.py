"""Compare the compiled and pure-NumPy transform kernels.

Usage: python3 benchmarks/bench_kernels.py [--max-n 4096] [--batch 1] [--repeat 5]

Prints best-of-``repeat`` wall times for idsct on ``batch`` columns and the
speedup of the compiled backend over the fallback.
"""

import argparse
import timeit

import numpy as np

from gammatrix import transforms as tr


def bench(n, batch, repeat, backend):
    rng = np.random.default_rng(n)
    x = rng.standard_normal((n, batch)) if batch > 1 else rng.standard_normal(n)
    plan = tr.get_plan(n)
    tr.idsct(x, plan, backend=backend)  # warm up
    number = max(1, 20000 // (n * batch))
    times = timeit.repeat(lambda: tr.idsct(x, plan, backend=backend), number=number, repeat=repeat)
    return min(times) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=4096)
    ap.add_argument("--batch", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = [b for b in ("compiled", "python") if b in tr.BACKENDS]
    if len(backends) < 2:
        print("compiled kernels not built; timing the python fallback only")
    print(f"{'n':>6}" + "".join(f"{b + ' (us)':>16}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    n = 4
    while n <= args.max_n:
        times = [bench(n, args.batch, args.repeat, b) for b in backends]
        row = f"{n:>6}" + "".join(f"{1e6 * t:>16.1f}" for t in times)
        if len(times) == 2:
            row += f"   {times[1] / times[0]:7.1f}x"
        print(row)
        n *= 2


if __name__ == "__main__":
    main()
