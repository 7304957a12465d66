"""Compare the compiled elimination kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from unisolv import _pykernels
from unisolv.dofsys import dof_matrix
from unisolv.simplexint import Simplex

try:
    from unisolv import _ckernels
except ImportError:
    _ckernels = None


def integer_rows(m):
    """Clear denominators row by row, as the exact-matrix layer does."""
    from math import lcm

    out = []
    for row in m.to_rows():
        den = lcm(*(c.denominator for c in row))
        out.append([int(c * den) for c in row])
    return out


def cases(rng):
    yield "det 40x40 ints |a|<=100", "det_int", ([[rng.randint(-100, 100) for _ in range(40)] for _ in range(40)],)
    yield "rref 30x45 ints |a|<=9", "rref_int", ([[rng.randint(-9, 9) for _ in range(45)] for _ in range(30)], 45)
    re = [[rng.randint(-20, 20) for _ in range(20)] for _ in range(20)]
    im = [[rng.randint(-20, 20) for _ in range(20)] for _ in range(20)]
    yield "gaussian det 20x20", "det_gauss", (re, im)
    for k, d in [(4, 2), (5, 2), (2, 3)]:
        rows = integer_rows(dof_matrix(k, d, Simplex.reference(d)))
        yield f"DOF matrix k={k} d={d} ({len(rows)}x{len(rows)})", "det_int", (rows,)


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'case':36s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, func, fargs in cases(random.Random(args.seed)):
        tp, rp = best_of(getattr(_pykernels, func), fargs, args.repeat)
        tc, rc = best_of(getattr(_ckernels, func), fargs, args.repeat)
        if rp != rc:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:36s} {tp * 1e3:8.2f}ms {tc * 1e3:8.2f}ms {tp / tc:7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
