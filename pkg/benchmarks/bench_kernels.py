"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from kinvol import kernels


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    compiled = kernels.compiled()
    impls = [kernels.python] + ([compiled] if compiled is not None else [])
    if compiled is None:
        print("compiled kernels not built; timing the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'size':>8}" + "".join(f"{m.BACKEND:>12}" for m in impls) + f"{'speedup':>10}")
    for n in (8, 12, 16):
        L, a, R = rng.standard_normal((3, n + 1, n + 1))
        times = [_best(lambda m=m: m.commutator_images(L, a, R), args.repeat, 200) for m in impls]
        _row("commutator_images", n, times)
    for n_max in (1000, 10_000):
        times = [_best(lambda m=m: m.count_length_two_table(n_max), args.repeat, 3) for m in impls]
        _row("count_length_two_table", n_max, times)


def _row(name, size, times):
    cells = "".join(f"{t * 1e6:>10.1f}us" for t in times)
    speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
    print(f"{name:<28}{size:>8}{cells}{speed}")


if __name__ == "__main__":
    main()
