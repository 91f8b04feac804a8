"""Timing comparison of the compiled kernels against the numpy fallback.

Run twice from a shell to compare backends:

    python benchmarks/bench_kernels.py
    BOL_DISABLE_NUMBA=1 python benchmarks/bench_kernels.py

The backend is chosen at import time from BOL_DISABLE_NUMBA, so a
single process can only measure one side.
"""

import argparse
import time

import numpy as np

from bol import _kernels
from bol.grid import GridFunction, total_variation
from bol.orlicz import l1_modulus


def timeit(fn, repeat=5):
    fn()  # warm-up (includes jit compilation on the compiled backend)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=256, help="grid side length")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    f2 = GridFunction(1.0 / args.n, (0.0, 0.0),
                      rng.uniform(-1, 1, (args.n, args.n)))
    f1 = GridFunction(1.0 / args.n, (0.0,), rng.uniform(-1, 1, args.n * args.n))

    print(f"backend: {_kernels.BACKEND}  (grid {args.n}^2)")
    t = timeit(lambda: total_variation(f2), args.repeat)
    print(f"  total_variation 2d     {t * 1e3:8.3f} ms")
    t = timeit(lambda: total_variation(f1), args.repeat)
    print(f"  total_variation 1d     {t * 1e3:8.3f} ms")
    t = timeit(lambda: l1_modulus(f2, 8.0 / args.n), args.repeat)
    print(f"  l1_modulus (8-cell)    {t * 1e3:8.3f} ms")
    t = timeit(lambda: _kernels.mc_symdiff_volume(3, 1.0, 0.5, 1_000_000, 1),
               args.repeat)
    print(f"  mc_symdiff (1e6, d=3)  {t * 1e3:8.3f} ms")


if __name__ == "__main__":
    main()
