"""Compare the compiled and pure-Python Smith normal form kernels.

    python benchmarks/bench_snf.py [--sizes 2 4 6] [--count 200] [--seed 1]

Both kernels see the same random matrices; results must agree exactly.
The "fallback" column counts matrices whose transforms overflowed int64,
so the compiled call was redone in Python.
"""

import argparse
import random
import time

from sixtermk import IntMatrix, _kernel, smith_normal_form
from sixtermk._kernel import compiled_available


def matrices(rng, size, count, bound):
    return [
        IntMatrix([[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)], size, size)
        for _ in range(count)
    ]


def timed(ms, backend):
    start = time.perf_counter()
    out = [smith_normal_form(m, backend) for m in ms]
    return time.perf_counter() - start, out


def overflows(ms):
    count = 0
    for m in ms:
        try:
            _kernel._snf_c.snf_lists(m.tolist(), *m.shape)
        except OverflowError:
            count += 1
    return count


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6, 8, 12])
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--bound", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()
    if not compiled_available():
        print("compiled kernel not built; only the Python kernel is timed")
    rng = random.Random(args.seed)
    print(f"{'size':>4}  {'count':>5}  {'python s':>9}  {'compiled s':>10}  {'speedup':>7}  {'fallback':>8}")
    for size in args.sizes:
        ms = matrices(rng, size, args.count, args.bound)
        py_t, py_out = timed(ms, "python")
        if compiled_available():
            c_t, c_out = timed(ms, "compiled")
            if c_out != py_out:
                raise SystemExit(f"kernels disagree at size {size}")
            print(f"{size:>4}  {args.count:>5}  {py_t:>9.3f}  {c_t:>10.3f}  {py_t / c_t:>6.1f}x  {overflows(ms):>8}")
        else:
            print(f"{size:>4}  {args.count:>5}  {py_t:>9.3f}  {'-':>10}  {'-':>7}  {'-':>8}")


if __name__ == "__main__":
    main()
