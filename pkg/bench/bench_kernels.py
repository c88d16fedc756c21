"""Time the elimination kernels and one end-to-end workload.

    python bench/bench_kernels.py [--size 60] [--repeat 3]

Compares the pure-Python kernel with the compiled one (if built) on random
sparse Gaussian-rational matrices, then runs the H^1 correspondence sweep
with whichever backend is active.
"""

import argparse
import random
import time

from liftlab import _kernels_py, catalog
from liftlab.cohomology import compute_h1, default_space
from liftlab.gq import GaussianRational
from liftlab.liealg import structure_constants

try:
    from liftlab import _kernels_c
except ImportError:
    _kernels_c = None


def random_rows(n, density, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        row = {}
        for j in range(n):
            if rng.random() < density:
                v = GaussianRational(rng.randint(-9, 9), rng.choice((0, 0, rng.randint(-3, 3))))
                if v:
                    row[j] = v
        rows.append(row)
    return rows


def time_kernel(mod, rows, repeat):
    best = float("inf")
    for _ in range(repeat):
        pivots = {}
        t = time.perf_counter()
        for r in rows:
            mod.rref_insert(pivots, r)
        best = min(best, time.perf_counter() - t)
    return best, pivots


def sweep():
    t = time.perf_counter()
    n = 0
    for eid, p in catalog.enumerate_instances():
        e = catalog.get_entry(eid)
        if e.is_lift or not e.transitive:
            continue
        alg = structure_constants(catalog.instantiate(eid, p))
        compute_h1(alg, default_space(alg))
        n += 1
    return n, time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=60)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rows = random_rows(args.size, args.density, seed=1)
    t_py, piv_py = time_kernel(_kernels_py, rows, args.repeat)
    print(f"rref {args.size}x{args.size} python:   {t_py:.3f}s")
    if _kernels_c is not None:
        t_c, piv_c = time_kernel(_kernels_c, rows, args.repeat)
        assert piv_c == piv_py, "backends disagree"
        print(f"rref {args.size}x{args.size} compiled: {t_c:.3f}s  ({t_py / t_c:.2f}x)")
    else:
        print("compiled kernel not built")

    from liftlab import BACKEND

    n, dt = sweep()
    print(f"H^1 over {n} base instances ({BACKEND}): {dt:.2f}s")


if __name__ == "__main__":
    main()
