"""Compare the numba kernels with their numpy fallbacks.

Runs each kernel on a realistic workload with both backends, checks the
outputs agree, and prints best-of-N timings. Usage:

    python3 benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from kfchiral import _kernels
from kfchiral.batch import CompiledPolys
from kfchiral.chirality import pluecker_polys, vandermonde_point
from kfchiral.factor import offdiag_minor_polys, sample_offdiag_rank


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def flat_args(polys, points):
    """Reach into CompiledPolys for the flattened arrays the kernel sees."""
    cp = CompiledPolys(polys)
    vals = np.array(cp._value_matrix(points), dtype=np.int64)
    return cp, (vals, cp.term_poly, np.array(cp.coefs, dtype=np.int64), cp.term_vars, cp.term_exps, len(polys))


def workloads():
    rng = np.random.default_rng(0)

    rels = pluecker_polys(8, 3)
    pts = [vandermonde_point([int(v) for v in rng.integers(-6, 7, 8)], 3).as_point() for _ in range(200)]
    _, args = flat_args(rels, pts)
    yield f"eval_terms: {len(rels)} Pluecker relations (8,3) x {len(pts)} points", "eval_terms", args

    minors = offdiag_minor_polys(8, 2)
    pts = []
    for s in range(100):
        y = sample_offdiag_rank(8, 2, seed=s, check=False)
        # clear denominators so the integer kernel applies
        den = int(np.lcm.reduce([v.denominator for v in y.derived.values.values()]))
        pts.append({k: int(v * den) for k, v in y.derived.as_point().items()})
    _, args = flat_args(minors, pts)
    yield f"eval_terms: {len(minors)} minors n=8 x {len(pts)} points", "eval_terms", args

    perms = _kernels.permutation_array(8)
    inv = np.argsort(perms, axis=1).astype(np.int64)
    mat = np.zeros((8, 8), dtype=np.int64)
    for a in range(4):
        mat[a, (a + 1) % 4] = 1
    edges = np.array([(a, (a + 1) % 3) for a in range(3)], dtype=np.int64)
    yield "monomial_orbit_values: 3-cycle monomial over Sym(8)", "monomial_orbit_values", (inv, mat, edges)

    yield "inversion_counts: Sym(8) on a 4-subset", "inversion_counts", (perms, np.array([0, 2, 5, 7], dtype=np.int64))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'workload':62s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for label, name, kargs in workloads():
        fast = getattr(_kernels, f"{name}_numba")
        slow = getattr(_kernels, f"{name}_numpy")
        fast(*kargs)  # compile outside the timed region
        t_fast, a = best_of(lambda: fast(*kargs), args.repeats)
        t_slow, b = best_of(lambda: slow(*kargs), args.repeats)
        if not np.array_equal(a, b):
            raise SystemExit(f"backends disagree on {label}")
        print(f"{label:62s} {t_fast * 1e3:8.2f}ms {t_slow * 1e3:8.2f}ms {t_slow / t_fast:7.1f}x")


if __name__ == "__main__":
    main()
