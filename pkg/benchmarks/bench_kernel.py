"""Timing comparison of the two state-evolution kernels.

The collapsed simulator spends essentially all of its time in ``evolve``
(phase rotation + rank-one mixer update, once per layer).  This script
times the compiled extension against the pure-Python fallback over a
grid of spectrum sizes and layer counts, and reports the speedup.

Run from the repository root:

    python benchmarks/bench_kernel.py            # both kernels
    python benchmarks/bench_kernel.py --repeats 9
"""

import argparse
import timeit

import numpy as np

from thqaoa import _evolve_py

try:
    from thqaoa import _evolve as _evolve_c
except ImportError:  # pragma: no cover - build without the extension
    _evolve_c = None


def make_inputs(rng, n, r):
    masses = rng.dirichlet(np.ones(n))
    weights = np.sqrt(masses)
    q = rng.normal(0.0, 3.0, n)
    betas = rng.uniform(-np.pi, np.pi, r)
    gammas = rng.uniform(-np.pi, np.pi, r)
    return weights, q, betas, gammas


def time_kernel(evolve, weights, q, betas, gammas, repeats):
    def call():
        v = weights.astype(np.complex128)
        evolve(weights, q, betas, gammas, v)

    # best-of-repeats removes scheduler noise; each sample loops enough
    # times to be measurable
    loops = max(1, int(2e5 / (weights.size * betas.size)))
    best = min(timeit.repeat(call, number=loops, repeat=repeats))
    return best / loops


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timing samples per cell")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'atoms':>8} {'layers':>7} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for n in (32, 256, 2048, 10_000, 50_000):
        for r in (1, 4, 16):
            weights, q, betas, gammas = make_inputs(rng, n, r)
            t_py = time_kernel(_evolve_py.evolve, weights, q, betas, gammas, args.repeats)
            if _evolve_c is None:
                print(f"{n:>8} {r:>7} {t_py * 1e6:>10.1f}us {'n/a':>12} {'n/a':>8}")
                continue
            t_c = time_kernel(_evolve_c.evolve, weights, q, betas, gammas, args.repeats)
            print(
                f"{n:>8} {r:>7} {t_py * 1e6:>10.1f}us {t_c * 1e6:>10.1f}us "
                f"{t_py / t_c:>7.1f}x"
            )


if __name__ == "__main__":
    main()
