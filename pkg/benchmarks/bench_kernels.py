"""Compare the numba kernels with their numpy twins.

    python benchmarks/bench_kernels.py [--k 13] [--reps 200]

Times the triple-curvature sum over a random slope fan of size k and the
Aberth iteration on a random polynomial of degree k, and reports the largest
difference between the two backends.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from webflat.curvature import kernels
from webflat.roots import _aberth_loop, _aberth_numpy, initial_ring


def _time(fn, reps):
    fn()  # warm-up, includes jit compilation
    t = time.perf_counter()
    for _ in range(reps):
        out = fn()
    return (time.perf_counter() - t) / reps, out


def bench_triples(k, reps, rng):
    rows = rng.normal(size=(6, k)) + 1j * rng.normal(size=(6, k))
    tri = kernels.triples(k)
    nb = kernels._get_nb_kernel()

    def run(kern):
        oK = np.zeros(len(tri), dtype=np.complex128)
        oS = np.zeros(len(tri))
        return kern(*rows, tri, oK, oS)[0]

    t_nb, K_nb = _time(lambda: run(nb), reps)
    t_np, K_np = _time(lambda: run(kernels._triples_numpy), reps)
    return t_nb, t_np, abs(K_nb - K_np) / max(abs(K_np), 1e-300)


def bench_aberth(k, reps, rng):
    c = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
    z0 = initial_ring(c, np.random.default_rng(1))

    def run(kern):
        z = z0.copy()
        kern(c, z, 200, 1e-15)
        return np.sort_complex(z)

    t_nb, z_nb = _time(lambda: run(_aberth_loop), reps)
    t_np, z_np = _time(lambda: run(_aberth_numpy), reps)
    return t_nb, t_np, float(np.max(np.abs(z_nb - z_np)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=13, help="web size / polynomial degree")
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<10}{'numba (us)':>14}{'numpy (us)':>14}{'speedup':>10}{'max diff':>12}")
    for name, fn in (("triples", bench_triples), ("aberth", bench_aberth)):
        t_nb, t_np, diff = fn(args.k, args.reps, rng)
        print(f"{name:<10}{t_nb * 1e6:>14.1f}{t_np * 1e6:>14.1f}{t_np / t_nb:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
